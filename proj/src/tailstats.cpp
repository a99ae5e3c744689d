#include "hyperlap/tailstats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_sf_erf.h>
#include <gsl/gsl_sf_gamma.h>
#include <gsl/gsl_sf_zeta.h>

namespace hyperlap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPenalty = 1e300;

void quiet_gsl() {
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

// Tail data collapsed to distinct values with multiplicities.
struct Tail {
    std::vector<double> x, w;
    double n = 0, sum_log = 0, sum_x = 0;
    double xmin = 0;
};

Tail make_tail(std::span<const double> values, double xmin) {
    Tail t;
    t.xmin = xmin;
    std::map<double, double> counts;
    for (double v : values) counts[v] += 1.0;
    for (const auto& [v, c] : counts) {
        t.x.push_back(v);
        t.w.push_back(c);
        t.n += c;
        t.sum_log += c * std::log(v);
        t.sum_x += c * v;
    }
    return t;
}

double log_q(double z) { return std::log(0.5) + gsl_sf_log_erfc(z / std::sqrt(2.0)); }
double log_phi(double z) { return log_q(-z); }

// log(Phi(z2) - Phi(z1)) for z1 < z2, stable in both tails.
double log_normal_mass(double z1, double z2) {
    if (z1 == kNegInf) return log_phi(z2);
    if (z1 > 0) {
        const double a = log_q(z1), b = log_q(z2);
        return a + std::log1p(-std::exp(b - a));
    }
    const double a = log_phi(z2), b = log_phi(z1);
    return a + std::log1p(-std::exp(b - a));
}

// log of the integral of x^-alpha e^(-lambda x) over [m, inf).
double log_tpl_integral(double alpha, double lambda, double m) {
    gsl_sf_result r;
    if (gsl_sf_gamma_inc_e(1.0 - alpha, lambda * m, &r) != GSL_SUCCESS || !(r.val > 0)) return kNegInf;
    return (alpha - 1.0) * std::log(lambda) + std::log(r.val);
}

// log sum_{k >= xmin} k^-alpha e^(-lambda k): direct head, Euler-Maclaurin tail.
double log_tpl_discrete_norm(double alpha, double lambda, double xmin) {
    constexpr int head = 200;
    auto logf = [&](double k) { return -alpha * std::log(k) - lambda * k; };
    const double ref = logf(xmin);
    double s = 0;
    for (int i = 0; i < head; ++i) {
        const double term = std::exp(logf(xmin + i) - ref);
        s += term;
        if (term < 1e-18 * s) return ref + std::log(s);
    }
    const double m = xmin + head;
    const double fm = std::exp(logf(m) - ref);
    const double li = log_tpl_integral(alpha, lambda, m);
    // derivatives of log f at m
    const double g1 = -alpha / m - lambda, g2 = alpha / (m * m), g3 = -2 * alpha / (m * m * m);
    double tail = fm / 2 - fm * g1 / 12 + fm * (g1 * g1 * g1 + 3 * g1 * g2 + g3) / 720;
    if (li != kNegInf) tail += std::exp(li - ref);
    return ref + std::log(s + tail);
}

double ll_tail(TailModel model, DataKind kind, const double* p, const Tail& t) {
    const double xmin = t.xmin;
    switch (model) {
        case TailModel::PowerLaw: {
            const double alpha = p[0];
            if (!(alpha > 1)) return kNegInf;
            if (kind == DataKind::Continuous)
                return t.n * std::log((alpha - 1) / xmin) - alpha * (t.sum_log - t.n * std::log(xmin));
            gsl_sf_result z;
            if (gsl_sf_hzeta_e(alpha, xmin, &z) != GSL_SUCCESS || !(z.val > 0)) return kNegInf;
            return -alpha * t.sum_log - t.n * std::log(z.val);
        }
        case TailModel::TruncatedPowerLaw: {
            const double alpha = p[0], lambda = p[1];
            if (!(alpha > 1) || !(lambda > 0)) return kNegInf;
            const double norm = kind == DataKind::Continuous ? log_tpl_integral(alpha, lambda, xmin)
                                                              : log_tpl_discrete_norm(alpha, lambda, xmin);
            if (!std::isfinite(norm)) return kNegInf;
            return -alpha * t.sum_log - lambda * t.sum_x - t.n * norm;
        }
        case TailModel::LogNormal: {
            const double mu = p[0], sigma = p[1];
            if (!(sigma > 0)) return kNegInf;
            if (kind == DataKind::Continuous) {
                const double lq = log_q((std::log(xmin) - mu) / sigma);
                double ll = -t.sum_log - t.n * (std::log(sigma) + 0.5 * std::log(2 * M_PI) + lq);
                for (std::size_t i = 0; i < t.x.size(); ++i) {
                    const double z = (std::log(t.x[i]) - mu) / sigma;
                    ll -= t.w[i] * 0.5 * z * z;
                }
                return ll;
            }
            auto z_at = [&](double edge) { return edge > 0 ? (std::log(edge) - mu) / sigma : kNegInf; };
            const double z0 = z_at(xmin - 0.5);
            const double lnorm = z0 == kNegInf ? 0.0 : log_q(z0);
            double ll = -t.n * lnorm;
            for (std::size_t i = 0; i < t.x.size(); ++i) ll += t.w[i] * log_normal_mass(z_at(t.x[i] - 0.5), z_at(t.x[i] + 0.5));
            return ll;
        }
        case TailModel::Exponential: {
            const double lambda = p[0];
            if (!(lambda > 0)) return kNegInf;
            const double excess = t.sum_x - t.n * xmin;
            if (kind == DataKind::Continuous) return t.n * std::log(lambda) - lambda * excess;
            return t.n * std::log1p(-std::exp(-lambda)) - lambda * excess;
        }
    }
    return kNegInf;
}

// Nelder-Mead on an unconstrained objective; returns the best point found.
std::vector<double> nelder_mead(const std::function<double(const double*)>& f, std::vector<double> x0, double step) {
    struct Ctx {
        const std::function<double(const double*)>* f;
    } ctx{&f};
    gsl_multimin_function fn;
    fn.n = x0.size();
    fn.params = &ctx;
    fn.f = [](const gsl_vector* v, void* params) {
        const auto* c = static_cast<Ctx*>(params);
        const double y = (*c->f)(v->data);
        return std::isfinite(y) ? y : kPenalty;
    };

    gsl_vector* x = gsl_vector_alloc(fn.n);
    gsl_vector* ss = gsl_vector_alloc(fn.n);
    for (std::size_t i = 0; i < fn.n; ++i) gsl_vector_set(x, i, x0[i]);
    gsl_vector_set_all(ss, step);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, fn.n);
    gsl_multimin_fminimizer_set(s, &fn, x, ss);
    for (int iter = 0; iter < 4000; ++iter) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-11) == GSL_SUCCESS) break;
    }
    std::vector<double> best(fn.n);
    for (std::size_t i = 0; i < fn.n; ++i) best[i] = gsl_vector_get(s->x, i);
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(ss);
    gsl_vector_free(x);
    return best;
}

// Minimizes over a grid of starts, then polishes from the best until the
// log-likelihood stops moving.
std::vector<double> multistart(const std::function<double(const double*)>& f,
                               const std::vector<std::vector<double>>& starts) {
    std::vector<double> best;
    double best_val = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        auto x = nelder_mead(f, s, 0.5);
        const double v = f(x.data());
        if (std::isfinite(v) && v < best_val) {
            best_val = v;
            best = std::move(x);
        }
    }
    if (best.empty()) return starts.front();
    for (int round = 0; round < 8; ++round) {
        auto x = nelder_mead(f, best, 0.05);
        const double v = f(x.data());
        if (!(v < best_val)) break;
        const bool done = best_val - v < 1e-12;
        best_val = v;
        best = std::move(x);
        if (done) break;
    }
    return best;
}

ModelFit make_fit(TailModel model, DataKind kind, std::vector<double> params, const Tail& t) {
    ModelFit f;
    f.model = model;
    f.params = std::move(params);
    f.log_likelihood = ll_tail(model, kind, f.params.data(), t);
    f.status = std::isfinite(f.log_likelihood) ? FitStatus::Ok : FitStatus::FitFailed;
    return f;
}

double discrete_pl_alpha(const Tail& t) {
    auto obj = [&](const double* a) {
        const double alpha = 1.0 + std::exp(a[0]);
        return -ll_tail(TailModel::PowerLaw, DataKind::Discrete, &alpha, t) / t.n;
    };
    const auto best = multistart(obj, {{std::log(0.5)}, {0.0}, {std::log(2.0)}});
    return 1.0 + std::exp(best[0]);
}

ModelFit fit_power_law(DataKind kind, const Tail& t) {
    if (kind == DataKind::Continuous) {
        const double alpha = 1.0 + t.n / (t.sum_log - t.n * std::log(t.xmin));
        return make_fit(TailModel::PowerLaw, kind, {alpha}, t);
    }
    return make_fit(TailModel::PowerLaw, kind, {discrete_pl_alpha(t)}, t);
}

ModelFit fit_truncated(DataKind kind, const Tail& t) {
    auto obj = [&](const double* q) {
        if (q[1] < -60 || q[1] > 10 || q[0] > 6) return kPenalty;
        const double p[2] = {1.0 + std::exp(q[0]), std::exp(q[1])};
        return -ll_tail(TailModel::TruncatedPowerLaw, kind, p, t) / t.n;
    };
    const double lam0 = 1.0 / (t.sum_x / t.n - t.xmin + 1.0);
    std::vector<std::vector<double>> starts;
    for (double a : {0.05, 0.5, 1.5})
        for (double l : {1e-3, 1e-1, 1.0}) starts.push_back({std::log(a), std::log(lam0 * l)});
    const auto best = multistart(obj, starts);
    return make_fit(TailModel::TruncatedPowerLaw, kind, {1.0 + std::exp(best[0]), std::exp(best[1])}, t);
}

ModelFit fit_log_normal(DataKind kind, const Tail& t) {
    double m = t.sum_log / t.n, var = 0;
    for (std::size_t i = 0; i < t.x.size(); ++i) var += t.w[i] * std::pow(std::log(t.x[i]) - m, 2);
    const double s = std::max(std::sqrt(var / t.n), 0.1);
    auto obj = [&](const double* q) {
        if (q[1] < -30 || q[1] > 6) return kPenalty;
        const double p[2] = {q[0], std::exp(q[1])};
        return -ll_tail(TailModel::LogNormal, kind, p, t) / t.n;
    };
    std::vector<std::vector<double>> starts;
    for (double dm : {0.0, -2.0, -6.0})
        for (double ds : {1.0, 2.0, 4.0}) starts.push_back({m + dm * s, std::log(s * ds)});
    const auto best = multistart(obj, starts);
    return make_fit(TailModel::LogNormal, kind, {best[0], std::exp(best[1])}, t);
}

ModelFit fit_exponential(DataKind kind, const Tail& t) {
    const double excess = t.sum_x / t.n - t.xmin;
    const double lambda = kind == DataKind::Continuous ? 1.0 / excess : std::log1p(1.0 / excess);
    return make_fit(TailModel::Exponential, kind, {lambda}, t);
}

// KS distance between tail data and a fitted power law.
double power_law_ks(DataKind kind, const Tail& t, double alpha) {
    double cum = 0, d = 0;
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        const double before = cum / t.n;
        cum += t.w[i];
        const double after = cum / t.n;
        if (kind == DataKind::Continuous) {
            const double f = 1.0 - std::pow(t.x[i] / t.xmin, 1.0 - alpha);
            d = std::max({d, std::abs(after - f), std::abs(before - f)});
        } else {
            const double f = 1.0 - gsl_sf_hzeta(alpha, t.x[i] + 1.0) / gsl_sf_hzeta(alpha, t.xmin);
            d = std::max(d, std::abs(after - f));
        }
    }
    return d;
}

double positive_min(const DistributionSample& data) {
    auto it = std::upper_bound(data.values().begin(), data.values().end(), 0.0);
    if (it == data.values().end()) throw Error(Errc::InsufficientTail, "no positive values to fit");
    return *it;
}

void check_tail(std::span<const double> tail) {
    if (tail.size() < 10)
        throw Error(Errc::InsufficientTail, "only " + std::to_string(tail.size()) + " values at or above xmin");
    if (tail.front() == tail.back()) throw Error(Errc::DegenerateData, "all tail values are equal");
}

double choose_xmin(const DistributionSample& data, DataKind kind, XminPolicy policy) {
    switch (policy.kind) {
        case XminPolicy::Kind::Minimum: return positive_min(data);
        case XminPolicy::Kind::Fixed:
            if (!(policy.value > 0)) throw Error(Errc::InvalidConfig, "xmin must be positive");
            return policy.value;
        case XminPolicy::Kind::KsScan: break;
    }
    const auto& v = data.values();
    auto first = std::upper_bound(v.begin(), v.end(), 0.0);
    double best_x = positive_min(data), best_d = std::numeric_limits<double>::infinity();
    for (auto it = first; it != v.end(); it = std::upper_bound(it, v.end(), *it)) {
        const std::span<const double> tail(&*it, static_cast<std::size_t>(v.end() - it));
        if (tail.size() < 10 || tail.front() == tail.back()) break;
        const Tail t = make_tail(tail, *it);
        const double alpha = kind == DataKind::Continuous ? 1.0 + t.n / (t.sum_log - t.n * std::log(t.xmin))
                                                          : discrete_pl_alpha(t);
        const double d = power_law_ks(kind, t, alpha);
        if (d < best_d) {
            best_d = d;
            best_x = *it;
        }
    }
    return best_x;
}

}  // namespace

// ---------------------------------------------------------------------------
// KS

double ks_distance_sorted(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error(Errc::EmptyInput, "KS distance needs two non-empty samples");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() || j < b.size()) {
        double x;
        if (j == b.size() || (i < a.size() && a[i] <= b[j]))
            x = a[i];
        else
            x = b[j];
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_distance(const DistributionSample& a, const DistributionSample& b) {
    return ks_distance_sorted(a.values(), b.values());
}

// ---------------------------------------------------------------------------
// Fits

const char* tail_model_name(TailModel m) {
    switch (m) {
        case TailModel::PowerLaw: return "power_law";
        case TailModel::TruncatedPowerLaw: return "truncated_power_law";
        case TailModel::LogNormal: return "log_normal";
        case TailModel::Exponential: return "exponential";
    }
    return "unknown";
}

double TailFitResult::ratio(TailModel m) const {
    const auto& a = fit(m);
    const auto& e = fit(TailModel::Exponential);
    if (a.status != FitStatus::Ok || e.status != FitStatus::Ok) return std::numeric_limits<double>::quiet_NaN();
    return a.log_likelihood - e.log_likelihood;
}

std::vector<double> tail_values(const DistributionSample& data, double xmin) {
    auto it = std::lower_bound(data.values().begin(), data.values().end(), xmin);
    return {it, data.values().end()};
}

TailFitResult fit_tails(const DistributionSample& data, DataKind kind, XminPolicy policy) {
    quiet_gsl();
    TailFitResult r;
    r.kind = kind;
    r.xmin = choose_xmin(data, kind, policy);
    const auto tail = tail_values(data, r.xmin);
    check_tail(tail);
    r.n_tail = tail.size();
    const Tail t = make_tail(tail, r.xmin);
    r.fits[0] = fit_power_law(kind, t);
    r.fits[1] = fit_truncated(kind, t);
    r.fits[2] = fit_log_normal(kind, t);
    r.fits[3] = fit_exponential(kind, t);
    return r;
}

double log_likelihood(TailModel model, DataKind kind, std::span<const double> params, std::span<const double> tail,
                      double xmin) {
    quiet_gsl();
    for (double x : tail)
        if (x < xmin) throw Error(Errc::InvalidConfig, "tail value below xmin");
    return ll_tail(model, kind, params.data(), make_tail(tail, xmin));
}

double local_optimality_gain(const ModelFit& fit, DataKind kind, std::span<const double> tail, double xmin,
                             double rel) {
    quiet_gsl();
    const Tail t = make_tail(tail, xmin);
    const double base = ll_tail(fit.model, kind, fit.params.data(), t);
    double gain = kNegInf;
    for (std::size_t i = 0; i < fit.params.size(); ++i) {
        for (double sign : {-1.0, 1.0}) {
            auto p = fit.params;
            p[i] *= 1.0 + sign * rel;
            gain = std::max(gain, ll_tail(fit.model, kind, p.data(), t) - base);
        }
    }
    return gain;
}

EvidenceSummary evidence_summary(double pw, double tpw, double logn) {
    EvidenceSummary s;
    const std::array<std::pair<TailModel, double>, 3> r = {
        {{TailModel::PowerLaw, pw}, {TailModel::TruncatedPowerLaw, tpw}, {TailModel::LogNormal, logn}}};
    double best = kNegInf;
    for (const auto& [m, v] : r) {
        if (std::isnan(v)) continue;
        s.any_heavy_tail_positive = s.any_heavy_tail_positive || v > 0;
        if (v > best) {
            best = v;
            s.best_model = m;
        }
    }
    return s;
}

EvidenceSummary evidence_summary(const TailFitResult& fit) {
    return evidence_summary(fit.ratio(TailModel::PowerLaw), fit.ratio(TailModel::TruncatedPowerLaw),
                            fit.ratio(TailModel::LogNormal));
}

nlohmann::json to_json(const TailFitResult& fit) {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    static const std::array<std::vector<const char*>, 4> names = {
        {{"alpha"}, {"alpha", "lambda"}, {"mu", "sigma"}, {"lambda"}}};
    nlohmann::json j;
    j["kind"] = fit.kind == DataKind::Discrete ? "discrete" : "continuous";
    j["xmin"] = fit.xmin;
    j["n_tail"] = fit.n_tail;
    for (TailModel m : all_tail_models) {
        const auto& f = fit.fit(m);
        nlohmann::json mj;
        mj["status"] = f.status == FitStatus::Ok ? "ok" : "fit_failed";
        const auto& pn = names[static_cast<std::size_t>(m)];
        for (std::size_t i = 0; i < f.params.size() && i < pn.size(); ++i) mj["params"][pn[i]] = num(f.params[i]);
        mj["log_likelihood"] = num(f.log_likelihood);
        j["models"][tail_model_name(m)] = mj;
        if (m != TailModel::Exponential) j["ratios"][tail_model_name(m)] = num(fit.ratio(m));
    }
    const auto ev = evidence_summary(fit);
    j["any_heavy_tail_positive"] = ev.any_heavy_tail_positive;
    j["best_model"] = tail_model_name(ev.best_model);
    return j;
}

}  // namespace hyperlap
