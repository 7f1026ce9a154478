#include <cmath>

#include <Eigen/Eigenvalues>

#include "semcom/errors.hpp"
#include "semcom/metrics.hpp"

namespace semcom::metrics {
namespace {

Eigen::MatrixXd covariance(const FeatureMatrix& d, Eigen::RowVectorXd& mean) {
  mean = d.colwise().mean();
  const Eigen::MatrixXd centered = d.rowwise() - mean;
  return centered.transpose() * centered / static_cast<double>(d.rows() - 1);
}

void check_pair(const FeatureMatrix& d, const FeatureMatrix& d_hat) {
  if (d.cols() != d_hat.cols())
    throw InvalidArgument("feature matrices must share the feature dimension");
  if (d.rows() < 2 || d_hat.rows() < 2)
    throw InvalidArgument("feature matrices need at least two rows");
  if (!d.allFinite() || !d_hat.allFinite()) throw InvalidArgument("non-finite features");
}

}  // namespace

Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("sqrtm_psd needs a square matrix");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw InvalidArgument("sqrtm_psd needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-10 * scale)
      throw InvalidArgument("sqrtm_psd: matrix has a negative eigenvalue " + std::to_string(ev(i)));
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

double fdsd(const FeatureMatrix& d, const FeatureMatrix& d_hat) {
  check_pair(d, d_hat);
  Eigen::RowVectorXd mu, mu_hat;
  const Eigen::MatrixXd s = covariance(d, mu);
  const Eigen::MatrixXd s_hat = covariance(d_hat, mu_hat);
  // Tr[(S S^)^1/2] = Tr[(S^1/2 S^ S^1/2)^1/2], and the latter is symmetric PSD.
  const Eigen::MatrixXd root = sqrtm_psd(s);
  Eigen::MatrixXd inner = root * s_hat * root;
  inner = 0.5 * (inner + inner.transpose());
  const double cross = sqrtm_psd(inner).trace();
  const double total = (mu - mu_hat).squaredNorm() + s.trace() + s_hat.trace() - 2.0 * cross;
  return std::sqrt(std::max(total, 0.0));
}

double polynomial_kernel(const Eigen::Ref<const Eigen::RowVectorXd>& u,
                         const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  const double k = u.dot(v) / static_cast<double>(u.size()) + 1.0;
  return k * k * k;
}

double kdsd(const FeatureMatrix& d, const FeatureMatrix& d_hat) {
  check_pair(d, d_hat);
  const double v = static_cast<double>(d.cols());
  const auto gram = [v](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd k = (a * b.transpose()).array() / v + 1.0;
    return Eigen::MatrixXd(k.array().cube());
  };
  const double u = static_cast<double>(d.rows()), uh = static_cast<double>(d_hat.rows());
  const Eigen::MatrixXd kxx = gram(d, d), kyy = gram(d_hat, d_hat), kxy = gram(d, d_hat);
  const double within_x = (kxx.sum() - kxx.trace()) / (u * (u - 1.0));
  const double within_y = (kyy.sum() - kyy.trace()) / (uh * (uh - 1.0));
  return within_x + within_y - 2.0 * kxy.sum() / (u * uh);
}

}  // namespace semcom::metrics
