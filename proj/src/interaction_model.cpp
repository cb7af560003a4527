#include "boltzmap/interaction_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "boltzmap/errors.hpp"
#include "boltzmap/rbm_model.hpp"

namespace boltzmap {

namespace {

void check_subset(const Subset& subset, int n_visible) {
  if (subset.empty()) throw std::invalid_argument("empty interaction subset");
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= n_visible) {
      throw std::invalid_argument("interaction index out of range");
    }
    if (i > 0 && subset[i] <= subset[i - 1]) {
      throw std::invalid_argument("interaction subset must be strictly increasing");
    }
  }
}

}  // namespace

int InteractionModel::max_order() const {
  return terms.empty() ? 0 : static_cast<int>(terms.rbegin()->first.size());
}

double InteractionModel::coefficient(const Subset& subset) const {
  auto it = terms.find(subset);
  return it == terms.end() ? 0.0 : it->second;
}

void InteractionModel::set(Subset subset, double value) {
  check_subset(subset, n_visible);
  if (!std::isfinite(value)) {
    throw NumericError("non-finite interaction coefficient");
  }
  terms[std::move(subset)] = value;
}

double energy_argument(const InteractionModel& model, const Eigen::VectorXd& v) {
  if (v.size() != model.n_visible) {
    throw std::invalid_argument("visible vector length mismatch");
  }
  double total = 0.0;
  for (const auto& [subset, value] : model.terms) {
    bool active = true;
    for (int k : subset) {
      if (v(k) == 0.0) {
        active = false;
        break;
      }
    }
    if (active) total += value;
  }
  return total;
}

void save_interactions(const InteractionModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << "order,indices,value\n";
  for (const auto& [subset, value] : model.terms) {
    out << subset.size() << ',';
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (i) out << ';';
      out << subset[i];
    }
    out << ',' << format_g17(value) << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

InteractionModel load_interactions(const std::string& path, int n_visible) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  InteractionModel model;
  int max_index = -1;
  std::string line;
  long line_no = 0;
  std::vector<std::pair<Subset, double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 || line == "order,indices,value") {
      if (line == "order,indices,value") continue;
    }
    std::istringstream ss(line);
    std::string order_field, index_field, value_field;
    if (!std::getline(ss, order_field, ',') ||
        !std::getline(ss, index_field, ',') ||
        !std::getline(ss, value_field)) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 columns");
    }
    Subset subset;
    std::istringstream is(index_field);
    std::string tok;
    while (std::getline(is, tok, ';')) subset.push_back(std::stoi(tok));
    if (subset.size() != static_cast<std::size_t>(std::stol(order_field))) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": order does not match index count");
    }
    for (int k : subset) max_index = std::max(max_index, k);
    rows.emplace_back(std::move(subset), std::stod(value_field));
  }
  model.n_visible = std::max(n_visible, max_index + 1);
  for (auto& [subset, value] : rows) model.set(std::move(subset), value);
  return model;
}

}  // namespace boltzmap
