#include <cmath>

#include "trapmode/errors.hpp"
#include "trapmode/lindblad.hpp"

namespace trapmode {

void BandGenerator::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& out) const {
  out.resize(size);
  for (int j = 0; j < size; ++j) {
    Complex v = diag[j] * x[j];
    if (j > 0) v += sub[j] * x[j - 1];
    if (j + 1 < size) v += sup[j] * x[j + 1];
    out[j] = v;
  }
}

void BandGenerator::apply_mirror(const Eigen::VectorXcd& x, Eigen::VectorXcd& out) const {
  out.resize(size);
  for (int j = 0; j < size; ++j) {
    Complex v = std::conj(diag[j]) * x[j];
    if (j > 0) v += sub[j] * x[j - 1];
    if (j + 1 < size) v += sup[j] * x[j + 1];
    out[j] = v;
  }
}

std::vector<BandGenerator> band_decompose(const GeneratorSpec& g) {
  const int n_max = g.n_max();
  const double cf = g.c_feed();
  const double cd = g.c_deph();
  const auto& spec = g.spec();

  // Diagonals of Q+^dag Q+ and Q-^dag Q-.
  std::vector<double> feed_loss(n_max + 1), deplete_loss(n_max + 1, 0.0), log_e(n_max + 1, 0.0);
  for (int k = 0; k <= n_max; ++k) feed_loss[k] = k < n_max ? k + 1.0 : 0.0;
  for (int k = 1; k <= n_max; ++k) {
    deplete_loss[k] = k * g.depletion_factor(k);
    log_e[k] = depletion_log_factor(spec, g.beta(), g.mu(), k);
  }

  std::vector<BandGenerator> bands;
  bands.reserve(n_max + 1);
  for (int s = 0; s <= n_max; ++s) {
    BandGenerator b;
    b.s = s;
    b.size = n_max + 1 - s;
    b.diag.resize(b.size);
    b.sub = Eigen::VectorXd::Zero(b.size);
    b.sup = Eigen::VectorXd::Zero(b.size);
    for (int j = 0; j < b.size; ++j) {
      const int m = j + s;
      const double decay = cd * s * s +
                           cf * (feed_loss[m] + feed_loss[j] + deplete_loss[m] + deplete_loss[j]);
      b.diag[j] = Complex(-decay, -(g.level(m) - g.level(j)));
      if (j > 0) b.sub[j] = 2.0 * cf * std::sqrt(double(m) * double(j));
      if (j + 1 < b.size)
        b.sup[j] = 2.0 * cf * std::exp(log_e[m + 1] + log_e[j + 1]) *
                   std::sqrt(double(m + 1) * double(j + 1));
    }
    bands.push_back(std::move(b));
  }
  return bands;
}

CMatrix apply_banded(const std::vector<BandGenerator>& bands, const CMatrix& rho) {
  const int dim = static_cast<int>(bands.size());
  if (rho.rows() != dim || rho.cols() != dim)
    throw DimensionMismatch("state dimension does not match band count");
  CMatrix out(dim, dim);
  Eigen::VectorXcd x, y;
  for (const auto& b : bands) {
    x.resize(b.size);
    for (int j = 0; j < b.size; ++j) x[j] = rho(j + b.s, j);
    b.apply(x, y);
    for (int j = 0; j < b.size; ++j) out(j + b.s, j) = y[j];
    if (b.s == 0) continue;
    for (int j = 0; j < b.size; ++j) x[j] = rho(j, j + b.s);
    b.apply_mirror(x, y);
    for (int j = 0; j < b.size; ++j) out(j, j + b.s) = y[j];
  }
  return out;
}

BandedState::BandedState(const CMatrix& hermitian) {
  const int dim = static_cast<int>(hermitian.rows());
  if (hermitian.cols() != dim || dim < 2) throw DimensionMismatch("banded state must be square");
  bands_.resize(dim);
  for (int s = 0; s < dim; ++s) {
    bands_[s].resize(dim - s);
    for (int j = 0; j < dim - s; ++j) bands_[s][j] = hermitian(j + s, j);
  }
}

BandedState::BandedState(int n_max, std::vector<Eigen::VectorXcd> bands)
    : bands_(std::move(bands)) {
  if (static_cast<int>(bands_.size()) != n_max + 1)
    throw DimensionMismatch("band count must be n_max + 1");
  for (int s = 0; s <= n_max; ++s)
    if (bands_[s].size() != n_max + 1 - s) throw DimensionMismatch("band length mismatch");
}

CMatrix BandedState::to_matrix() const {
  const int dim = static_cast<int>(bands_.size());
  CMatrix m(dim, dim);
  for (int s = 0; s < dim; ++s)
    for (int j = 0; j < dim - s; ++j) {
      m(j + s, j) = bands_[s][j];
      if (s > 0) m(j, j + s) = std::conj(bands_[s][j]);
    }
  return m;
}

}  // namespace trapmode
