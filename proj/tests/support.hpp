#pragma once

#include <string_view>
#include <vector>

#include "ift/generators.hpp"
#include "ift/numeric.hpp"
#include "ift/tree.hpp"

namespace ift::testing {

inline Rational R(std::string_view text) { return parse_rational(text); }

/// Eight vertices, five leaves: 1-2-3 path with 4, 5 on 1, 6 on 2 and 7, 8 on 3.
template <NumericField T = Rational>
InfoFlowTree<T> example_tree() {
  auto c = [](std::int64_t p, std::int64_t q) { return Field<T>::from_ratio(p, q); };
  return InfoFlowTree<T>({1, 2, 3, 4, 5, 6, 7, 8},
                         {{1, 2, c(1, 2)}, {2, 3, c(2, 3)}, {1, 4, c(1, 3)}, {1, 5, c(-1, 2)},
                          {2, 6, c(3, 4)}, {3, 7, c(1, 5)}, {3, 8, c(-2, 5)}});
}

/// Random tree on 2..max_vertices vertices with correlations k/8.
inline InfoFlowTree<Rational> random_grid_tree(CounterRng& rng, int max_vertices) {
  int n = static_cast<int>(rng.between(2, max_vertices));
  return random_tree<Rational>(rng, n, grid_rational_sampler(8));
}

}  // namespace ift::testing
