#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

namespace boltzmap {

/// Strictly increasing visible indices identifying one interaction term.
using Subset = std::vector<int>;

/// Orders subsets by size, then lexicographically; groups terms by
/// interaction order in files and iteration.
struct SubsetOrder {
  bool operator()(const Subset& a, const Subset& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// Model of interacting binary variables: log P(v) = sum_S I_S prod_{k in S}
/// v_k - log Z'. Zero coefficients may be omitted.
struct InteractionModel {
  int n_visible = 0;
  std::map<Subset, double, SubsetOrder> terms;

  int max_order() const;
  double coefficient(const Subset& subset) const;  // 0 when absent
  void set(Subset subset, double value);           // validates the subset
};

/// Exponent of P(v) (Z'-free): sum of coefficients whose subset is fully
/// active in v.
double energy_argument(const InteractionModel& model, const Eigen::VectorXd& v);

/// CSV with header `order,indices,value`; indices are semicolon-separated,
/// values carry 17 significant digits.
void save_interactions(const InteractionModel& model, const std::string& path);

/// Reads the CSV above. Lines starting with '#' are ignored. n_visible is
/// inferred as max index + 1 unless a larger value is given.
InteractionModel load_interactions(const std::string& path, int n_visible = 0);

}  // namespace boltzmap
