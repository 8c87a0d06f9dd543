#pragma once

#include <Eigen/Dense>
#include <deque>
#include <optional>

namespace ccinterp {

/// Pulay extrapolation over flattened parameter/error vector pairs.
class Diis {
 public:
  explicit Diis(int dim, double max_condition = 1e12) : dim_(dim), max_condition_(max_condition) {}

  /// Adds a pair and returns the extrapolated parameters (just `x` while only
  /// one pair is stored). Returns nothing when the subspace system is too
  /// ill-conditioned; the oldest pair is dropped in that case.
  std::optional<Eigen::VectorXd> push(const Eigen::VectorXd& x, const Eigen::VectorXd& err) {
    xs_.push_back(x);
    errs_.push_back(err);
    if (static_cast<int>(xs_.size()) > dim_) {
      xs_.pop_front();
      errs_.pop_front();
    }
    const auto m = static_cast<Eigen::Index>(xs_.size());
    if (m < 2) return x;
    // The Gram block is scaled to unit maximum diagonal so the condition
    // test does not depend on the size of the errors.
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) B(i, j) = B(j, i) = errs_[i].dot(errs_[j]);
    }
    const double scale = B.topLeftCorner(m, m).diagonal().maxCoeff();
    if (scale > 0.0) B.topLeftCorner(m, m) /= scale;
    for (Eigen::Index i = 0; i < m; ++i) B(i, m) = B(m, i) = -1.0;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs(m) = -1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    if (!(smallest > 0.0) || sv(0) / smallest > max_condition_) {
      xs_.pop_front();
      errs_.pop_front();
      return std::nullopt;
    }
    const Eigen::VectorXd c = svd.solve(rhs);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
    for (Eigen::Index i = 0; i < m; ++i) out += c(i) * xs_[i];
    return out;
  }

  void clear() {
    xs_.clear();
    errs_.clear();
  }

 private:
  int dim_;
  double max_condition_;
  std::deque<Eigen::VectorXd> xs_;
  std::deque<Eigen::VectorXd> errs_;
};

}  // namespace ccinterp
