#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace semcom::metrics {

struct EditOps {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t reference_length = 0;

  std::size_t distance() const { return substitutions + deletions + insertions; }
  EditOps& operator+=(const EditOps& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    reference_length += o.reference_length;
    return *this;
  }
  /// distance / reference_length; throws UndefinedRateError for an empty reference.
  double rate() const;
  friend bool operator==(const EditOps&, const EditOps&) = default;
};

/// Unit-cost Levenshtein alignment. Among minimal alignments the backtrace
/// prefers substitution (or match), then deletion, then insertion.
template <typename T>
EditOps edit_ops(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  const auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1), at(i - 1, j) + 1,
                           at(i, j - 1) + 1});

  EditOps ops;
  ops.reference_length = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const std::size_t diag = ref[i - 1] == hyp[j - 1] ? 0 : 1;
      if (at(i - 1, j - 1) + diag == at(i, j)) {
        ops.substitutions += diag;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i - 1, j) + 1 == at(i, j)) {
      ++ops.deletions;
      --i;
    } else {
      ++ops.insertions;
      --j;
    }
  }
  return ops;
}

/// Lowercase and trim surrounding whitespace.
std::string normalize_for_scoring(std::string_view text);
std::vector<std::string> split_words(std::string_view text);

EditOps char_ops(std::string_view ref, std::string_view hyp);
EditOps word_ops(std::string_view ref, std::string_view hyp);

/// Character error rate, spaces included.
double cer(std::string_view ref, std::string_view hyp);
/// Word error rate over whitespace-delimited words.
double wer(std::string_view ref, std::string_view hyp);

using FeatureMatrix = Eigen::MatrixXd;  // rows are observations

/// Principal square root of a symmetric PSD matrix via eigendecomposition.
Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& a);

/// Frechet distance between Gaussian fits of the rows of d and d_hat.
double fdsd(const FeatureMatrix& d, const FeatureMatrix& d_hat);

/// (u.v / V + 1)^3
double polynomial_kernel(const Eigen::Ref<const Eigen::RowVectorXd>& u,
                         const Eigen::Ref<const Eigen::RowVectorXd>& v);

/// Unbiased squared MMD with the cubic polynomial kernel. May be slightly negative.
double kdsd(const FeatureMatrix& d, const FeatureMatrix& d_hat);

// Acceptability thresholds from a listener survey. They depend on the feature
// extractor that produced D, so they are not meaningful for arbitrary features.
inline constexpr double kFdsdAcceptable = 10.0;
inline constexpr double kKdsdAcceptable = 0.012;

}  // namespace semcom::metrics
