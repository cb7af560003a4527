#include "boltzmap/rbm_model.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "boltzmap/errors.hpp"

namespace boltzmap {

void RbmModel::validate() const {
  if (b.size() < 1 || c.size() < 1) {
    throw std::invalid_argument("RbmModel requires N >= 1 and M >= 1");
  }
  if (W.rows() != b.size() || W.cols() != c.size()) {
    throw std::invalid_argument("RbmModel weight matrix must be N x M");
  }
  if (!b.allFinite() || !c.allFinite() || !W.allFinite()) {
    throw NumericError("RbmModel contains non-finite parameters");
  }
}

double rbm_log_weight(const RbmModel& model, const Eigen::VectorXd& v) {
  if (v.size() != model.n_visible()) {
    throw std::invalid_argument("visible vector length mismatch");
  }
  const Eigen::VectorXd q = model.W.transpose() * v;
  return model.b.dot(v) + hidden_cgf_sum(model, q);
}

double hidden_cgf_sum(const RbmModel& model, const Eigen::VectorXd& q) {
  double s = 0.0;
  for (Eigen::Index mu = 0; mu < q.size(); ++mu) {
    s += cgf(model.activation, model.c(mu), q(mu));
  }
  return s;
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void save_rbm(const RbmModel& model, const std::string& path) {
  model.validate();
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  const auto n = model.n_visible();
  const auto m = model.n_hidden();
  out << "boltzmap-rbm v1\n";
  out << n << ' ' << m << ' ' << to_string(model.activation) << '\n';
  for (Eigen::Index i = 0; i < n; ++i) out << format_g17(model.b(i)) << '\n';
  for (Eigen::Index mu = 0; mu < m; ++mu) out << format_g17(model.c(mu)) << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index mu = 0; mu < m; ++mu) {
      if (mu) out << ' ';
      out << format_g17(model.W(i, mu));
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

RbmModel load_rbm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::string header;
  std::getline(in, header);
  if (header != "boltzmap-rbm v1") {
    throw DataError(path + ": bad header '" + header + "'");
  }
  long n = 0, m = 0;
  std::string activation;
  in >> n >> m >> activation;
  if (!in || n < 1 || m < 1) throw DataError(path + ": bad dimension line");
  RbmModel model;
  model.activation = activation_from_string(activation);
  model.b.resize(n);
  model.c.resize(m);
  model.W.resize(n, m);
  for (long i = 0; i < n; ++i) in >> model.b(i);
  for (long mu = 0; mu < m; ++mu) in >> model.c(mu);
  for (long i = 0; i < n; ++i) {
    for (long mu = 0; mu < m; ++mu) in >> model.W(i, mu);
  }
  if (!in) throw DataError(path + ": truncated parameter block");
  model.validate();
  return model;
}

}  // namespace boltzmap
