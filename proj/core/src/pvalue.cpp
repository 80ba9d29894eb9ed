#include "gad/pvalue.hpp"

#include <algorithm>
#include <cmath>

#include "gad/error.hpp"
#include "gad/normal.hpp"
#include "gad/parallel.hpp"

namespace gad {
namespace {

double clamp_p(double p) { return std::clamp(p, kMinPValue, 1.0); }

}  // namespace

double singleton_pvalue(const UnivariateGMM& model, double x) {
  const std::vector<double> post = responsibilities(model, x);
  double p = 0.0;
  for (std::size_t l = 0; l < model.components(); ++l) {
    if (post[l] == 0.0) continue;
    p += two_sided_tail((x - model.means[l]) / std::sqrt(model.variances[l])) * post[l];
  }
  return clamp_p(p);
}

double pair_pvalue(const BivariateGMM& pair_model, std::array<double, 2> x) {
  const std::vector<double> post = responsibilities(pair_model, x[0], x[1]);
  double p = 0.0;
  for (std::size_t l = 0; l < pair_model.components(); ++l) {
    if (post[l] == 0.0) continue;
    const Covariance2& c = pair_model.covariances[l];
    const double a = std::abs(x[0] - pair_model.means[l][0]) / std::sqrt(c.xx);
    const double b = std::abs(x[1] - pair_model.means[l][1]) / std::sqrt(c.yy);
    p += bvn_corner_mass(a, b, std::clamp(c.correlation(), -1.0, 1.0)) * post[l];
  }
  return clamp_p(p);
}

double conditional_pvalue(const BivariateGMM& pair_model, std::array<double, 2> x,
                          int condition_slot) {
  if (condition_slot != 0 && condition_slot != 1)
    throw DomainError("conditional_pvalue: condition_slot must be 0 or 1");
  const double joint = pair_pvalue(pair_model, x);
  const double given =
      singleton_pvalue(marginalize(pair_model, condition_slot), x[static_cast<std::size_t>(condition_slot)]);
  return clamp_p(joint / given);
}

LogPValueTable::LogPValueTable(const NullModel& model, const DataBatch& batch, unsigned threads)
    : rows_(batch.rows()), dimension_(model.dimension()), pair_count_(model.pair_count()) {
  if (batch.cols() != dimension_) {
    throw DataQualityError("batch has " + std::to_string(batch.cols()) +
                           " feature columns but the null model has " +
                           std::to_string(dimension_));
  }
  batch.require_finite();
  singles_.resize(rows_ * dimension_);
  pairs_.resize(rows_ * pair_count_);
  parallel_for(rows_, threads, [&](std::size_t i) {
    const auto x = batch.row(i);
    for (std::size_t j = 0; j < dimension_; ++j)
      singles_[i * dimension_ + j] = std::log(singleton_pvalue(model.univariate(j), x[j]));
    std::size_t p = 0;
    for (std::size_t j = 0; j < dimension_; ++j)
      for (std::size_t k = j + 1; k < dimension_; ++k, ++p)
        pairs_[i * pair_count_ + p] = std::log(pair_pvalue(model.bivariate(j, k), {x[j], x[k]}));
  });
}

double LogPValueTable::pair(std::size_t row, std::size_t j, std::size_t k) const {
  if (j > k) std::swap(j, k);
  return pairs_[row * pair_count_ + NullModel::pair_index(j, k, dimension_)];
}

}  // namespace gad
