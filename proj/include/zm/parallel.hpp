#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace zm {

/// Worker count used by node-parallel evaluation. Results never depend on it:
/// every value is written to its own slot and reductions run in a fixed order.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Evaluates fn(i) for i in [0, count) and returns the values in index order.
std::vector<double> evaluate_indexed(std::size_t count,
                                     const std::function<double(std::size_t)>& fn);

/// Same, for callers that fill several outputs per index.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> values);

}  // namespace zm
