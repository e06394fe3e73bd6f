// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <vector>

namespace neariso {

enum class Direction { Increasing, Decreasing };

struct WeightedSeries {
    std::vector<double> values;
    std::vector<double> weights;
    Direction direction = Direction::Increasing;

    static WeightedSeries unit(std::vector<double> v, Direction d = Direction::Increasing);
    std::size_t size() const { return values.size(); }
    // Throws EmptyInput / NonpositiveWeight / SchemaError (length mismatch).
    void validate() const;
    // Same series with index order reversed and direction flipped to Increasing.
    WeightedSeries oriented() const;
};

// Contiguous index range [begin, end) in the caller's index order.
struct Block {
    std::size_t begin = 0;
    std::size_t end = 0;
    double weight = 0.0; // sum of weights
    double level = 0.0;
};

struct ClusterPartition {
    std::vector<Block> blocks;
    std::size_t size() const { return blocks.size(); }
};

ClusterPartition isotonic_fit(const WeightedSeries& s);
std::vector<double> expand(const ClusterPartition& p, std::size_t n);

// Number of maximal runs of equal adjacent values (relative tolerance rtol).
std::size_t count_runs(const std::vector<double>& v, double rtol = 1e-12);

} // namespace neariso
