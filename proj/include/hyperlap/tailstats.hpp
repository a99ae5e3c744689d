// tailstats.hpp - KS distance and heavy-tail model fits
#ifndef HYPERLAP_TAILSTATS_HPP
#define HYPERLAP_TAILSTATS_HPP

#include "hyperlap/core.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace hyperlap {

// Supremum distance between the empirical CDFs of two samples. Throws
// EmptyInput.
double ks_distance(const DistributionSample& a, const DistributionSample& b);
// Same on already sorted ranges.
double ks_distance_sorted(std::span<const double> a, std::span<const double> b);

enum class TailModel { PowerLaw, TruncatedPowerLaw, LogNormal, Exponential };
constexpr std::array<TailModel, 4> all_tail_models = {TailModel::PowerLaw, TailModel::TruncatedPowerLaw,
                                                      TailModel::LogNormal, TailModel::Exponential};
const char* tail_model_name(TailModel m);

// Discrete: integer-valued data, likelihoods are probability masses.
enum class DataKind { Discrete, Continuous };

struct XminPolicy {
    enum class Kind { Minimum, Fixed, KsScan };
    Kind kind = Kind::Minimum;
    double value = 0.0;  // Fixed only

    static XminPolicy minimum() { return {}; }
    static XminPolicy fixed(double x) { return {Kind::Fixed, x}; }
    static XminPolicy ks_scan() { return {Kind::KsScan, 0.0}; }
};

enum class FitStatus { Ok, FitFailed };

// Parameter layout per model:
//   PowerLaw          {alpha}
//   TruncatedPowerLaw {alpha, lambda}
//   LogNormal         {mu, sigma}
//   Exponential       {lambda}
struct ModelFit {
    TailModel model = TailModel::PowerLaw;
    FitStatus status = FitStatus::FitFailed;
    std::vector<double> params;
    double log_likelihood = 0.0;
};

struct TailFitResult {
    DataKind kind = DataKind::Discrete;
    double xmin = 0.0;
    std::size_t n_tail = 0;
    std::array<ModelFit, 4> fits;  // indexed by TailModel

    const ModelFit& fit(TailModel m) const { return fits[static_cast<std::size_t>(m)]; }
    // loglik(m) - loglik(exponential); NaN when either fit failed.
    double ratio(TailModel m) const;
};

// Fits all four models on the values x >= xmin. Zero and negative values
// never enter the tail. Throws InsufficientTail (< 10 tail points) or
// DegenerateData (all tail values equal).
TailFitResult fit_tails(const DistributionSample& data, DataKind kind, XminPolicy xmin = {});

// Total log-likelihood of `tail` (all >= xmin) under the model; -inf for
// parameters outside the model's domain.
double log_likelihood(TailModel model, DataKind kind, std::span<const double> params, std::span<const double> tail,
                      double xmin);

// Largest log-likelihood gain from moving any single parameter by +-`rel`.
double local_optimality_gain(const ModelFit& fit, DataKind kind, std::span<const double> tail, double xmin,
                             double rel = 0.01);

// Tail values used by a fit: sorted x >= xmin.
std::vector<double> tail_values(const DistributionSample& data, double xmin);

struct EvidenceSummary {
    bool any_heavy_tail_positive = false;
    TailModel best_model = TailModel::Exponential;  // argmax ratio over the three heavy-tailed models
};

EvidenceSummary evidence_summary(const TailFitResult& fit);
EvidenceSummary evidence_summary(double pw, double tpw, double logn);

nlohmann::json to_json(const TailFitResult& fit);

}  // namespace hyperlap

#endif  // HYPERLAP_TAILSTATS_HPP
