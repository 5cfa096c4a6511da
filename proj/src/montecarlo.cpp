#include "mavar/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <random>
#include <sstream>

namespace mavar {

namespace {

struct RowSampler {
  std::vector<double> cumulative;
  std::size_t last_positive = 0;

  explicit RowSampler(const Eigen::RowVectorXd& row) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      acc += row(j);
      cumulative.push_back(acc);
      if (row(j) > 0.0) last_positive = static_cast<std::size_t>(j);
    }
  }

  std::size_t draw(double u) const {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto j = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(j, last_positive);
  }
};

}  // namespace

std::string kernel_digest(const StochasticKernel& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const Matrix& m = p.matrix();
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Trajectory simulate(const StochasticKernel& p, const Initial& initial, std::size_t n,
                    std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one step");
  const std::size_t size = p.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::size_t state = 0;
  if (const auto* s = std::get_if<std::size_t>(&initial)) {
    if (*s >= size) throw Error(ErrorCode::BadInitial, "initial state out of range");
    state = *s;
  } else {
    const Vector& mu = std::get<Vector>(initial);
    if (static_cast<std::size_t>(mu.size()) != size || (mu.array() < 0.0).any() ||
        std::abs(mu.sum() - 1.0) > kStochasticTol) {
      throw Error(ErrorCode::BadInitial, "initial distribution is not on the simplex");
    }
    state = RowSampler(mu.transpose()).draw(unif(rng));
  }

  std::vector<RowSampler> rows;
  rows.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    rows.emplace_back(p.matrix().row(static_cast<Eigen::Index>(i)));
  }

  Trajectory traj;
  traj.seed = seed;
  traj.kernel_hash = kernel_digest(p);
  traj.rng = "mt19937_64";
  traj.states.reserve(n + 1);
  traj.states.push_back(state);
  for (std::size_t t = 0; t < n; ++t) {
    state = rows[state].draw(unif(rng));
    traj.states.push_back(state);
  }
  return traj;
}

std::size_t default_batch_len(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(double(n)))));
}

AvarEstimate batch_means_avar(const Trajectory& traj, const Observable& f,
                              std::size_t batch_len) {
  if (batch_len < 1 || traj.states.size() < 2 * batch_len) {
    throw Error(ErrorCode::TooShort, "trajectory shorter than two batches");
  }
  const std::size_t n_batches = traj.states.size() / batch_len;
  const Vector& values = f.values();
  std::vector<double> means(n_batches, 0.0);
  for (std::size_t b = 0; b < n_batches; ++b) {
    double acc = 0.0;
    for (std::size_t t = b * batch_len; t < (b + 1) * batch_len; ++t) {
      const std::size_t s = traj.states[t];
      if (s >= static_cast<std::size_t>(values.size())) {
        throw Error(ErrorCode::DimensionMismatch, "state index outside observable");
      }
      acc += values(static_cast<Eigen::Index>(s)) - f.pi_mean();
    }
    means[b] = acc / static_cast<double>(batch_len);
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= static_cast<double>(n_batches);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  const double var_means = ss / static_cast<double>(n_batches - 1);

  AvarEstimate est;
  est.value = static_cast<double>(batch_len) * var_means;
  est.std_error = est.value * std::sqrt(2.0 / static_cast<double>(n_batches - 1));
  est.n_batches = n_batches;
  est.batch_len = batch_len;
  return est;
}

}  // namespace mavar
