#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gad/data.hpp"
#include "gad/nullmodel.hpp"

namespace gad {

/// Floor applied to every p-value so log-domain scores stay finite.
inline constexpr double kMinPValue = 1e-300;
/// ln(kMinPValue).
inline constexpr double kLogMinPValue = -690.77552789821368;

/// Feature index and observed value whose outlier event is being tested.
struct OutlierEvent {
  std::size_t feature = 0;
  double value = 0.0;
};

/// Mixture p-value of one observation: sum over components of the two-sided
/// Gaussian tail around that component's mean, weighted by the posterior
/// probability the observation came from the component. In [kMinPValue, 1].
double singleton_pvalue(const UnivariateGMM& model, double x);

/// Second-order mixture p-value: per component, the bivariate normal mass of
/// the four corners at least as far from the mean as x on both axes, weighted
/// by the pair posterior. In [kMinPValue, 1].
double pair_pvalue(const BivariateGMM& pair_model, std::array<double, 2> x);

/// P[outlier on the other slot | outlier on condition_slot]: the pair p-value
/// divided by the singleton p-value of the conditioning coordinate under the
/// marginalized pair model, clamped into [kMinPValue, 1].
double conditional_pvalue(const BivariateGMM& pair_model, std::array<double, 2> x,
                          int condition_slot);

/// Log singleton p-values for every (row, feature) and log pair p-values for
/// every (row, feature pair) of a batch, evaluated once and shared by all
/// candidate evaluations of a search.
class LogPValueTable {
 public:
  LogPValueTable(const NullModel& model, const DataBatch& batch, unsigned threads = 1);

  std::size_t rows() const { return rows_; }
  std::size_t dimension() const { return dimension_; }
  double singleton(std::size_t row, std::size_t feature) const {
    return singles_[row * dimension_ + feature];
  }
  /// j != k in any order.
  double pair(std::size_t row, std::size_t j, std::size_t k) const;

 private:
  std::size_t rows_ = 0;
  std::size_t dimension_ = 0;
  std::size_t pair_count_ = 0;
  std::vector<double> singles_;
  std::vector<double> pairs_;
};

}  // namespace gad
