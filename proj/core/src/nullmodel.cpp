#include "gad/nullmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "gad/error.hpp"
#include "gad/normal.hpp"
#include "gad/parallel.hpp"
#include "gad/random.hpp"

namespace gad {
namespace {

constexpr double kLog2Pi = 1.83787706640934548356;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> v) {
  const double mx = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double t : v) s += std::exp(t - mx);
  return mx + std::log(s);
}

void check_weights(const std::vector<double>& w) {
  if (w.empty()) throw DomainError("mixture has no components");
  double sum = 0.0;
  for (double x : w) {
    if (!(x > 0.0)) throw DomainError("mixture weight must be positive");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("mixture weights do not sum to 1");
}

void univariate_log_terms(const UnivariateGMM& m, double x, std::span<double> out) {
  for (std::size_t l = 0; l < m.components(); ++l) {
    const double d = x - m.means[l];
    out[l] = std::log(m.weights[l]) - 0.5 * (kLog2Pi + std::log(m.variances[l]) +
                                             d * d / m.variances[l]);
  }
}

double mahalanobis2(const Covariance2& c, double dx, double dy) {
  return (c.yy * dx * dx - 2.0 * c.xy * dx * dy + c.xx * dy * dy) / c.determinant();
}

void bivariate_log_terms(const BivariateGMM& m, double x0, double x1, std::span<double> out) {
  for (std::size_t l = 0; l < m.components(); ++l) {
    const Covariance2& c = m.covariances[l];
    const double q = mahalanobis2(c, x0 - m.means[l][0], x1 - m.means[l][1]);
    out[l] = std::log(m.weights[l]) - kLog2Pi - 0.5 * std::log(c.determinant()) - 0.5 * q;
  }
}

std::vector<double> normalize_log_terms(std::vector<double> terms,
                                        const std::vector<double>& mahalanobis) {
  const double lse = log_sum_exp(terms);
  if (!std::isfinite(lse)) {
    const auto nearest = std::min_element(mahalanobis.begin(), mahalanobis.end());
    std::vector<double> r(terms.size(), 0.0);
    r[static_cast<std::size_t>(nearest - mahalanobis.begin())] = 1.0;
    return r;
  }
  double sum = 0.0;
  for (double& t : terms) {
    t = std::exp(t - lse);
    sum += t;
  }
  for (double& t : terms) t /= sum;
  return terms;
}

template <typename T>
std::vector<T> json_array(const nlohmann::json& j, const char* key) {
  return j.at(key).get<std::vector<T>>();
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain types

double UnivariateGMM::log_density(double x) const {
  std::vector<double> terms(components());
  univariate_log_terms(*this, x, terms);
  return log_sum_exp(terms);
}

void UnivariateGMM::validate() const {
  check_weights(weights);
  if (means.size() != weights.size() || variances.size() != weights.size())
    throw DomainError("univariate mixture parameter lengths disagree");
  for (double v : variances)
    if (!(v > 0.0)) throw DomainError("univariate mixture variance must be positive");
}

double Covariance2::correlation() const { return xy / std::sqrt(xx * yy); }

double BivariateGMM::log_density(double x0, double x1) const {
  std::vector<double> terms(components());
  bivariate_log_terms(*this, x0, x1, terms);
  return log_sum_exp(terms);
}

void BivariateGMM::validate() const {
  check_weights(weights);
  if (means.size() != weights.size() || covariances.size() != weights.size())
    throw DomainError("bivariate mixture parameter lengths disagree");
  for (const auto& c : covariances)
    if (!(c.xx > 0.0 && c.yy > 0.0 && c.determinant() > 0.0))
      throw DomainError("bivariate covariance is not positive definite");
}

// ---------------------------------------------------------------------------
// Fitting

UnivariateGMM fit_univariate(std::span<const double> column, const EMConfig& config) {
  SampleMatrix<1> x(static_cast<Eigen::Index>(column.size()), 1);
  for (std::size_t t = 0; t < column.size(); ++t) {
    if (!std::isfinite(column[t]))
      throw DataQualityError("non-finite value at row " + std::to_string(t), t);
    x(static_cast<Eigen::Index>(t), 0) = column[t];
  }
  const MixtureFit<1> fit = fit_mixture<1>(x, config);
  UnivariateGMM m;
  m.degenerate = fit.degenerate;
  for (std::size_t l = 0; l < fit.mixture.components(); ++l) {
    m.weights.push_back(fit.mixture.weights[l]);
    m.means.push_back(fit.mixture.means[l](0));
    m.variances.push_back(fit.mixture.covariances[l](0, 0));
  }
  return m;
}

BivariateGMM fit_bivariate(std::span<const double> first, std::span<const double> second,
                           const EMConfig& config) {
  if (first.size() != second.size()) throw DomainError("pair columns differ in length");
  SampleMatrix<2> x(static_cast<Eigen::Index>(first.size()), 2);
  for (std::size_t t = 0; t < first.size(); ++t) {
    if (!std::isfinite(first[t]) || !std::isfinite(second[t]))
      throw DataQualityError("non-finite value at row " + std::to_string(t), t);
    x(static_cast<Eigen::Index>(t), 0) = first[t];
    x(static_cast<Eigen::Index>(t), 1) = second[t];
  }
  const MixtureFit<2> fit = fit_mixture<2>(x, config);
  BivariateGMM m;
  m.degenerate = fit.degenerate;
  for (std::size_t l = 0; l < fit.mixture.components(); ++l) {
    const auto& mu = fit.mixture.means[l];
    const auto& s = fit.mixture.covariances[l];
    m.weights.push_back(fit.mixture.weights[l]);
    m.means.push_back({mu(0), mu(1)});
    m.covariances.push_back({s(0, 0), 0.5 * (s(0, 1) + s(1, 0)), s(1, 1)});
  }
  return m;
}

UnivariateGMM marginalize(const BivariateGMM& pair_model, int keep) {
  if (keep != 0 && keep != 1) throw DomainError("marginalize: keep must be 0 or 1");
  UnivariateGMM m;
  m.weights = pair_model.weights;
  m.degenerate = pair_model.degenerate;
  for (std::size_t l = 0; l < pair_model.components(); ++l) {
    m.means.push_back(pair_model.means[l][keep]);
    m.variances.push_back(keep == 0 ? pair_model.covariances[l].xx
                                    : pair_model.covariances[l].yy);
  }
  return m;
}

std::vector<double> responsibilities(const UnivariateGMM& model, double x) {
  std::vector<double> terms(model.components());
  univariate_log_terms(model, x, terms);
  std::vector<double> maha(model.components());
  for (std::size_t l = 0; l < maha.size(); ++l) {
    const double d = x - model.means[l];
    maha[l] = d * d / model.variances[l];
  }
  return normalize_log_terms(std::move(terms), maha);
}

std::vector<double> responsibilities(const BivariateGMM& model, double x0, double x1) {
  std::vector<double> terms(model.components());
  bivariate_log_terms(model, x0, x1, terms);
  std::vector<double> maha(model.components());
  for (std::size_t l = 0; l < maha.size(); ++l)
    maha[l] = mahalanobis2(model.covariances[l], x0 - model.means[l][0], x1 - model.means[l][1]);
  return normalize_log_terms(std::move(terms), maha);
}

std::vector<double> sample(const UnivariateGMM& model, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(model.weights.begin(), model.weights.end());
  std::normal_distribution<double> z;
  std::vector<double> out(n);
  for (double& v : out) {
    const std::size_t l = pick(rng);
    v = model.means[l] + std::sqrt(model.variances[l]) * z(rng);
  }
  return out;
}

std::vector<std::array<double, 2>> sample(const BivariateGMM& model, std::size_t n,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(model.weights.begin(), model.weights.end());
  std::normal_distribution<double> z;
  // Cholesky factors per component.
  struct Factor {
    double l00, l10, l11;
  };
  std::vector<Factor> factors;
  for (const auto& c : model.covariances) {
    const double l00 = std::sqrt(c.xx);
    const double l10 = c.xy / l00;
    factors.push_back({l00, l10, std::sqrt(std::max(0.0, c.yy - l10 * l10))});
  }
  std::vector<std::array<double, 2>> out(n);
  for (auto& p : out) {
    const std::size_t l = pick(rng);
    const double z0 = z(rng);
    const double z1 = z(rng);
    p[0] = model.means[l][0] + factors[l].l00 * z0;
    p[1] = model.means[l][1] + factors[l].l10 * z0 + factors[l].l11 * z1;
  }
  return out;
}

double estimate_mi(const BivariateGMM& pair_model, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw DomainError("estimate_mi needs at least one sample");
  const UnivariateGMM first = marginalize(pair_model, 0);
  const UnivariateGMM second = marginalize(pair_model, 1);
  const auto draws = sample(pair_model, samples, seed);
  // Kahan-compensated mean of the log density ratio.
  double sum = 0.0;
  double carry = 0.0;
  for (const auto& p : draws) {
    const double term = pair_model.log_density(p[0], p[1]) - first.log_density(p[0]) -
                        second.log_density(p[1]);
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return std::max(0.0, sum / static_cast<double>(samples));
}

// ---------------------------------------------------------------------------
// NullModel

NullModel::NullModel(std::vector<std::string> feature_names, std::vector<UnivariateGMM> univariate,
                     std::vector<BivariateGMM> bivariate, std::vector<double> mi,
                     std::size_t training_rows, std::string config_hash)
    : names_(std::move(feature_names)),
      univariate_(std::move(univariate)),
      bivariate_(std::move(bivariate)),
      mi_(std::move(mi)),
      training_rows_(training_rows),
      config_hash_(std::move(config_hash)) {
  const std::size_t d = names_.size();
  if (d == 0) throw DomainError("null model needs at least one feature");
  if (univariate_.size() != d) throw DomainError("null model needs one univariate model per feature");
  if (bivariate_.size() != d * (d - 1) / 2)
    throw DomainError("null model needs one bivariate model per feature pair");
  if (mi_.size() != d * d) throw DomainError("mutual information matrix must be D×D");
  for (const auto& m : univariate_) m.validate();
  for (const auto& m : bivariate_) m.validate();
  for (std::size_t j = 0; j < d; ++j) {
    if (mi_[j * d + j] != 0.0) throw DomainError("mutual information diagonal must be zero");
    for (std::size_t k = j + 1; k < d; ++k) {
      if (mi_[j * d + k] != mi_[k * d + j] || !(mi_[j * d + k] >= 0.0))
        throw DomainError("mutual information matrix must be symmetric and nonnegative");
    }
  }
}

std::size_t NullModel::pair_index(std::size_t j, std::size_t k, std::size_t dimension) {
  return j * (2 * dimension - j - 1) / 2 + (k - j - 1);
}

const BivariateGMM& NullModel::bivariate(std::size_t j, std::size_t k) const {
  if (!(j < k && k < dimension())) throw DomainError("bivariate(j, k) requires j < k < D");
  return bivariate_[pair_index(j, k, dimension())];
}

nlohmann::json NullModel::to_json() const {
  using nlohmann::json;
  json doc;
  doc["format"] = "gad-null-model";
  doc["version"] = kNullModelFormatVersion;
  doc["D"] = dimension();
  doc["T_l"] = training_rows_;
  doc["config_hash"] = config_hash_;
  doc["features"] = names_;
  json uni = json::array();
  for (const auto& m : univariate_) {
    uni.push_back({{"weights", m.weights},
                   {"means", m.means},
                   {"variances", m.variances},
                   {"degenerate", m.degenerate}});
  }
  doc["univariate"] = std::move(uni);
  json bi = json::array();
  const std::size_t d = dimension();
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j + 1; k < d; ++k) {
      const BivariateGMM& m = bivariate(j, k);
      json covs = json::array();
      for (const auto& c : m.covariances) covs.push_back({c.xx, c.xy, c.yy});
      bi.push_back({{"j", j},
                    {"k", k},
                    {"model",
                     {{"weights", m.weights},
                      {"means", m.means},
                      {"covariances", std::move(covs)},
                      {"degenerate", m.degenerate}}}});
    }
  }
  doc["bivariate"] = std::move(bi);
  json mi = json::array();
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> row(mi_.begin() + static_cast<std::ptrdiff_t>(j * d),
                            mi_.begin() + static_cast<std::ptrdiff_t>((j + 1) * d));
    mi.push_back(std::move(row));
  }
  doc["mi"] = std::move(mi);
  return doc;
}

NullModel NullModel::from_json(const nlohmann::json& doc) {
  try {
    const int version = doc.at("version").get<int>();
    if (version != kNullModelFormatVersion)
      throw DataQualityError("unsupported null model version " + std::to_string(version));
    const std::size_t d = doc.at("D").get<std::size_t>();
    std::vector<std::string> names;
    if (doc.contains("features")) {
      names = json_array<std::string>(doc, "features");
    } else {
      for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
    }
    if (names.size() != d) throw DataQualityError("feature name count does not match D");

    std::vector<UnivariateGMM> uni;
    for (const auto& u : doc.at("univariate")) {
      UnivariateGMM m;
      m.weights = json_array<double>(u, "weights");
      m.means = json_array<double>(u, "means");
      m.variances = json_array<double>(u, "variances");
      m.degenerate = u.value("degenerate", false);
      uni.push_back(std::move(m));
    }
    std::vector<BivariateGMM> bi(d * (d - 1) / 2);
    std::vector<bool> seen(bi.size(), false);
    for (const auto& entry : doc.at("bivariate")) {
      const std::size_t j = entry.at("j").get<std::size_t>();
      const std::size_t k = entry.at("k").get<std::size_t>();
      if (!(j < k && k < d)) throw DataQualityError("bivariate entry has invalid pair");
      const auto& mj = entry.at("model");
      BivariateGMM m;
      m.weights = json_array<double>(mj, "weights");
      m.means = mj.at("means").get<std::vector<std::array<double, 2>>>();
      for (const auto& c : mj.at("covariances")) {
        const auto v = c.get<std::array<double, 3>>();
        m.covariances.push_back({v[0], v[1], v[2]});
      }
      m.degenerate = mj.value("degenerate", false);
      const std::size_t idx = pair_index(j, k, d);
      if (seen[idx]) throw DataQualityError("duplicate bivariate entry");
      seen[idx] = true;
      bi[idx] = std::move(m);
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      throw DataQualityError("bivariate models missing for some feature pairs");
    std::vector<double> mi;
    const auto rows = doc.at("mi").get<std::vector<std::vector<double>>>();
    if (rows.size() != d) throw DataQualityError("mi matrix must have D rows");
    for (const auto& r : rows) {
      if (r.size() != d) throw DataQualityError("mi matrix must have D columns");
      mi.insert(mi.end(), r.begin(), r.end());
    }
    return NullModel(std::move(names), std::move(uni), std::move(bi), std::move(mi),
                     doc.at("T_l").get<std::size_t>(), doc.value("config_hash", std::string{}));
  } catch (const nlohmann::json::exception& e) {
    throw DataQualityError(std::string("malformed null model document: ") + e.what());
  } catch (const DomainError& e) {
    throw DataQualityError(std::string("invalid null model: ") + e.what());
  }
}

void NullModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << to_json().dump(1) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

NullModel NullModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataQualityError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

// ---------------------------------------------------------------------------
// Training

std::string config_digest(const NullModelConfig& config) {
  auto em = [](const EMConfig& c) {
    return nlohmann::json{{"max_components", c.max_components},
                          {"restarts", c.restarts},
                          {"tolerance", c.tolerance},
                          {"max_iterations", c.max_iterations},
                          {"variance_floor", c.variance_floor},
                          {"bic_patience", c.bic_patience}};
  };
  const nlohmann::json canon{{"univariate_em", em(config.univariate_em)},
                             {"bivariate_em", em(config.bivariate_em)},
                             {"mi_samples", config.mi_samples},
                             {"seed", config.seed}};
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

NullModel train_null(const DataBatch& batch, const NullModelConfig& config) {
  batch.require_finite();
  const std::size_t d = batch.cols();
  const std::size_t t = batch.rows();
  if (d == 0) throw DataQualityError("training batch has no feature columns");
  if (t < config.min_training_rows) {
    throw DataQualityError("training batch has " + std::to_string(t) + " rows; at least " +
                           std::to_string(config.min_training_rows) + " are required");
  }

  std::vector<std::vector<double>> columns(d);
  for (std::size_t j = 0; j < d; ++j) columns[j] = batch.column(j);

  const std::size_t pairs = d * (d - 1) / 2;
  std::vector<std::pair<std::size_t, std::size_t>> pair_list;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) pair_list.emplace_back(j, k);

  std::vector<UnivariateGMM> uni(d);
  std::vector<BivariateGMM> bi(pairs);
  parallel_for(d + pairs, config.threads, [&](std::size_t task) {
    if (task < d) {
      EMConfig em = config.univariate_em;
      em.seed = derive_seed(config.seed, task);
      uni[task] = fit_univariate(columns[task], em);
    } else {
      const std::size_t p = task - d;
      EMConfig em = config.bivariate_em;
      em.seed = derive_seed(config.seed, 1'000'000 + p);
      bi[p] = fit_bivariate(columns[pair_list[p].first], columns[pair_list[p].second], em);
    }
  });

  std::vector<double> mi(d * d, 0.0);
  std::vector<double> pair_mi(pairs, 0.0);
  parallel_for(pairs, config.threads, [&](std::size_t p) {
    pair_mi[p] = estimate_mi(bi[p], config.mi_samples, derive_seed(config.seed, 2'000'000 + p));
  });
  for (std::size_t p = 0; p < pairs; ++p) {
    const auto [j, k] = pair_list[p];
    mi[j * d + k] = mi[k * d + j] = pair_mi[p];
  }

  return NullModel(batch.feature_names(), std::move(uni), std::move(bi), std::move(mi), t,
                   config_digest(config));
}

}  // namespace gad
