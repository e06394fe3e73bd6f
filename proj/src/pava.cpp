// SPDX-License-Identifier: MIT
#include "neariso/pava.hpp"
#include "neariso/errors.hpp"

#include <algorithm>
#include <cmath>

namespace neariso {

WeightedSeries WeightedSeries::unit(std::vector<double> v, Direction d) {
    WeightedSeries s;
    s.weights.assign(v.size(), 1.0);
    s.values = std::move(v);
    s.direction = d;
    return s;
}

void WeightedSeries::validate() const {
    if (values.empty()) throw EmptyInput("empty series");
    if (weights.size() != values.size()) throw SchemaError("values and weights differ in length");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw NonpositiveWeight("weights must be positive and finite");
    for (double v : values)
        if (!std::isfinite(v)) throw SchemaError("non-finite value in series");
}

WeightedSeries WeightedSeries::oriented() const {
    WeightedSeries r = *this;
    if (direction == Direction::Decreasing) {
        std::reverse(r.values.begin(), r.values.end());
        std::reverse(r.weights.begin(), r.weights.end());
        r.direction = Direction::Increasing;
    }
    return r;
}

ClusterPartition isotonic_fit(const WeightedSeries& s) {
    s.validate();
    const WeightedSeries o = s.oriented();
    const std::size_t n = o.size();
    std::vector<Block> st;
    std::vector<double> sums; // weighted sums, kept separately so levels stay exact means
    st.reserve(n);
    sums.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        st.push_back({i, i + 1, o.weights[i], o.values[i]});
        sums.push_back(o.weights[i] * o.values[i]);
        while (st.size() > 1 && st.back().level < st[st.size() - 2].level) {
            Block b = st.back();
            double sb = sums.back();
            st.pop_back();
            sums.pop_back();
            Block& a = st.back();
            a.end = b.end;
            a.weight += b.weight;
            sums.back() += sb;
            a.level = sums.back() / a.weight;
        }
    }
    ClusterPartition p;
    if (s.direction == Direction::Decreasing) {
        for (auto it = st.rbegin(); it != st.rend(); ++it)
            p.blocks.push_back({n - it->end, n - it->begin, it->weight, it->level});
    } else {
        p.blocks = std::move(st);
    }
    return p;
}

std::vector<double> expand(const ClusterPartition& p, std::size_t n) {
    std::vector<double> v(n, 0.0);
    for (const Block& b : p.blocks)
        for (std::size_t i = b.begin; i < b.end && i < n; ++i) v[i] = b.level;
    return v;
}

std::size_t count_runs(const std::vector<double>& v, double rtol) {
    if (v.empty()) return 0;
    std::size_t k = 1;
    for (std::size_t i = 1; i < v.size(); ++i) {
        double a = v[i - 1], b = v[i];
        if (a == b) continue;
        if (std::isfinite(a) && std::isfinite(b) && std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b))) continue;
        ++k;
    }
    return k;
}

} // namespace neariso
