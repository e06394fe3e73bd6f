// SPDX-License-Identifier: MIT
#pragma once

#include "neariso/apps.hpp"
#include "neariso/errors.hpp"
#include "neariso/expfam.hpp"
#include "neariso/io.hpp"
#include "neariso/oracle.hpp"
#include "neariso/path.hpp"
#include "neariso/pava.hpp"
#include "neariso/selection.hpp"
