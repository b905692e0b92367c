#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "freegeo/metric_space.hpp"

namespace freegeo {

using Params = std::map<std::string, double>;

/// One truncation of a metric family together with its distinguished pair.
struct FamilyMember {
  PointedMetricSpace space;
  std::size_t x = 0;
  std::size_t y = 1;
};

/// Indexed family of finite spaces, e.g. the first n points of an infinite
/// example. Members are generated on demand and always validated.
class MetricFamily {
 public:
  using Generator = std::function<FamilyMember(std::size_t)>;

  MetricFamily(std::string name, Params params, std::size_t min_index, Generator generator);

  const std::string& name() const { return name_; }
  const Params& params() const { return params_; }
  std::size_t min_index() const { return min_index_; }

  /// Throws Error for index < min_index() or when the generator fails.
  FamilyMember at(std::size_t index) const;

 private:
  std::string name_;
  Params params_;
  std::size_t min_index_;
  Generator generator_;
};

// Named spaces. Parameters (defaults in brackets):
//   line                 n [4], spacing [1]     points 0, s, 2s, ... on R
//   equilateral          n [3], side [1]
//   branching_tree       n [3]                  d(0,k)=1, d(j,k)=2
//   three_point_aligned                         {-1, 0, 1} rooted at 0
//   cantor               level [2], <= 6        interval endpoints after `level` removals
//   petr                 index [5], ratio [0.5] x=0, y, z_1..z_index; eps_i = ratio^i
//   rotund_not_G         index [10]             x=0, y, z_1..z_index
//   c0_luna              index [5], alpha = 1/n  {0} and e_1 + alpha_n e_n, n = 2..index+1
//
// Families: petr, rotund_not_G, branching_tree, c0_luna (index as above).

std::vector<std::string> gallery_names();
bool gallery_is_family(std::string_view name);

/// Throws Error for unknown names or out-of-range parameters. For family
/// names the `index` parameter selects the truncation.
PointedMetricSpace gallery_space(std::string_view name, const Params& params = {});

/// Throws Error for names that are not families.
MetricFamily gallery_family(std::string_view name, const Params& params = {});

}  // namespace freegeo
