#include "rbsim/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "rbsim/littlewood_paley.hpp"
#include "rbsim/multiplier.hpp"
#include "rbsim/run.hpp"
#include "rbsim/spectral.hpp"

namespace rbsim {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double recip(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

void require(bool ok, const std::string& lemma, const std::string& range) {
    if (!ok) {
        throw ConfigError(lemma + ": parameters violate " + range);
    }
}

bool holder(double a, double b, double c) { return std::abs(recip(a) - (recip(b) + recip(c))) < 1e-12; }

double norm(const Grid2D& grid, const SpectralField& f, double p) {
    return lp_norm(grid, real_inverse(grid, f), p);
}

SpectralField times(const Grid2D& grid, const RealField& a, const RealField& b) {
    return forward(grid, a * b);
}

std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Per-sample work returns (sample row, violation flag) pairs; samples are
// evaluated on up to e.threads workers and merged in sample order.
using Rows = std::vector<std::pair<InequalityReport::Sample, bool>>;

InequalityReport run_ensemble(const std::string& lemma, const EnsembleSpec& e,
                              std::map<std::string, double> params,
                              const std::function<Rows(const Grid2D&, int)>& work) {
    if (e.size < 1) {
        throw ConfigError(lemma + ": ensemble size must be >= 1");
    }
    const Grid2D grid(e.n);
    std::vector<Rows> results(static_cast<size_t>(e.size));
    const int workers = std::clamp(e.threads, 1, e.size);
    if (workers == 1) {
        for (int i = 0; i < e.size; ++i) {
            results[static_cast<size_t>(i)] = work(grid, i);
        }
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int i = w; i < e.size; i += workers) {
                        results[static_cast<size_t>(i)] = work(grid, i);
                    }
                } catch (...) {
                    errors[static_cast<size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        for (auto& err : errors) {
            if (err) {
                std::rethrow_exception(err);
            }
        }
    }
    InequalityReport rep;
    rep.lemma = lemma;
    rep.n = e.n;
    rep.seed = e.seed;
    rep.ensemble_size = e.size;
    rep.params = std::move(params);
    rep.params["k_lo"] = e.k_lo;
    rep.params["k_hi"] = e.k_hi;
    for (const Rows& rows : results) {
        for (const auto& [row, violation] : rows) {
            rep.add(row, violation);
        }
    }
    return rep;
}

// Ratio row for one block; an empty block (lhs and rhs both negligible) is
// skipped, a zero rhs with nonzero lhs is a hard violation.
void push_ratio(Rows& rows, int sample, int block, double lhs, double rhs, double floor) {
    if (std::abs(lhs) <= floor && std::abs(rhs) <= floor) {
        return;
    }
    const double ratio = lhs / rhs;
    rows.push_back({{sample, block, lhs, rhs, ratio}, !std::isfinite(ratio)});
}

std::vector<int> nonempty_blocks(const DyadicPartition& part, const SpectralField& f, int lo,
                                 int hi) {
    std::vector<int> out;
    const double total = std::sqrt(f.abs2().sum());
    for (int j = lo; j <= std::min(hi, part.j_max()); ++j) {
        if (std::sqrt(part.delta(f, j).abs2().sum()) > 1e-10 * total) {
            out.push_back(j);
        }
    }
    return out;
}

void validate_bernstein(const std::string& lemma, const BernsteinParams& b) {
    require(b.alpha >= 0.0 && b.alpha <= 2.0, lemma, "alpha in [0, 2]");
    require(b.p >= 1.0 && b.q >= b.p, lemma, "1 <= p <= q <= inf");
}

double bernstein_scale(const BernsteinParams& b, int j) {
    return std::pow(2.0, 2.0 * b.alpha * j + 2.0 * j * (recip(b.p) - recip(b.q)));
}

// |x| with the minimum-image convention on the periodic box.
RealField torus_distance(const Grid2D& grid) {
    const int n = grid.n();
    RealField out(n, n);
    const double L = grid.box_length();
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
            const double x1 = std::min(grid.x(a), L - grid.x(a));
            const double x2 = std::min(grid.x(b), L - grid.x(b));
            out(a, b) = std::hypot(x1, x2);
        }
    }
    return out;
}

}  // namespace

std::uint64_t EnsembleSpec::sample_seed(int sample, int stream) const {
    // splitmix64 finalizer over (seed, sample, stream)
    std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(sample) * 0xbf58476d1ce4e5b9ULL +
                      static_cast<std::uint64_t>(stream) * 0x94d049bb133111ebULL + 0x632be59bd9b4e019ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void InequalityReport::add(const Sample& s, bool violation) {
    samples.push_back(s);
    if (violation) {
        ++violations;
    }
    if (std::isnan(s.ratio)) {
        worst_ratio = inf;
    } else {
        worst_ratio = std::max(worst_ratio, s.ratio);
    }
    empirical_constant = worst_ratio;
}

void InequalityReport::write_text(std::ostream& out) const {
    out << "lemma=" << lemma << '\n'
        << "n=" << n << '\n'
        << "seed=" << seed << '\n'
        << "ensemble_size=" << ensemble_size << '\n'
        << "samples=" << samples.size() << '\n'
        << "worst_ratio=" << format(worst_ratio) << '\n'
        << "empirical_constant=" << format(empirical_constant) << '\n'
        << "violations=" << violations << '\n';
    for (const auto& [k, v] : params) {
        out << "param." << k << '=' << format(v) << '\n';
    }
}

void InequalityReport::write_csv(std::ostream& out) const {
    out << "sample,block,lhs,rhs,ratio\n";
    for (const auto& s : samples) {
        out << s.sample << ',' << s.block << ',' << format(s.lhs) << ',' << format(s.rhs) << ','
            << format(s.ratio) << '\n';
    }
}

InequalityReport check_bernstein_lowpass(const EnsembleSpec& e, const BernsteinParams& b) {
    const std::string lemma = "bernstein-lowpass";
    validate_bernstein(lemma, b);
    const MultiplierOp lam = op_lambda(2.0 * b.alpha);
    return run_ensemble(lemma, e, {{"alpha", b.alpha}, {"p", b.p}, {"q", b.q}},
                        [&](const Grid2D& grid, int i) {
                            const DyadicPartition part(grid);
                            const SpectralField f =
                                random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i));
                            Rows rows;
                            for (int j = 1; j <= 4; ++j) {
                                const SpectralField sf = part.low_pass(f, j);
                                const double lhs = norm(grid, lam(grid, sf), b.q);
                                const double rhs = bernstein_scale(b, j) * norm(grid, sf, b.p);
                                push_ratio(rows, i, j, lhs, rhs, 1e-12 * e.rms);
                            }
                            return rows;
                        });
}

InequalityReport check_bernstein_upper(const EnsembleSpec& e, const BernsteinParams& b) {
    const std::string lemma = "bernstein-annulus-upper";
    validate_bernstein(lemma, b);
    const MultiplierOp lam = op_lambda(2.0 * b.alpha);
    return run_ensemble(lemma, e, {{"alpha", b.alpha}, {"p", b.p}, {"q", b.q}},
                        [&](const Grid2D& grid, int i) {
                            const DyadicPartition part(grid);
                            const SpectralField f =
                                random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i));
                            Rows rows;
                            for (int j : nonempty_blocks(part, f, 0, part.j_max())) {
                                const SpectralField df = part.delta(f, j);
                                const double lhs = norm(grid, lam(grid, df), b.q);
                                const double rhs = bernstein_scale(b, j) * norm(grid, df, b.p);
                                push_ratio(rows, i, j, lhs, rhs, 0.0);
                            }
                            return rows;
                        });
}

InequalityReport check_bernstein_lower(const EnsembleSpec& e, const BernsteinParams& b) {
    const std::string lemma = "bernstein-annulus-lower";
    validate_bernstein(lemma, b);
    const MultiplierOp lam = op_lambda(2.0 * b.alpha);
    return run_ensemble(lemma, e, {{"alpha", b.alpha}, {"q", b.q}},
                        [&](const Grid2D& grid, int i) {
                            const DyadicPartition part(grid);
                            const SpectralField f =
                                random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i));
                            Rows rows;
                            for (int j : nonempty_blocks(part, f, 0, part.j_max())) {
                                const SpectralField df = part.delta(f, j);
                                const double lhs = std::pow(2.0, 2.0 * b.alpha * j) * norm(grid, df, b.q);
                                const double rhs = norm(grid, lam(grid, df), b.q);
                                push_ratio(rows, i, j, lhs, rhs, 0.0);
                            }
                            return rows;
                        });
}

namespace {

InequalityReport positivity(const std::string& lemma, const EnsembleSpec& e, const SymbolG& g,
                            double p, bool pointwise) {
    require(p >= 2.0 && std::isfinite(p), lemma, "p in [2, inf)");
    return run_ensemble(lemma, e, {{"p", p}}, [&](const Grid2D& grid, int i) {
        const RealField f =
            real_inverse(grid, random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i)));
        const PositivityReport r = pointwise_positivity_check(grid, f, g, p);
        const double gap = pointwise ? r.min_pointwise_gap : r.integral_gap / grid.area();
        const double deficit = -gap / r.scale;
        Rows rows;
        rows.push_back({{i, -1, gap, r.scale, deficit}, !(gap >= -r.tolerance)});
        return rows;
    });
}

}  // namespace

InequalityReport check_positivity_pointwise(const EnsembleSpec& e, const SymbolG& g, double p) {
    return positivity("positivity-pointwise", e, g, p, true);
}

InequalityReport check_positivity_integral(const EnsembleSpec& e, const SymbolG& g, double p) {
    return positivity("positivity-integral", e, g, p, false);
}

InequalityReport check_dissipative_bernstein(const EnsembleSpec& e, const SymbolG& g, double p) {
    const std::string lemma = "dissipative-bernstein";
    require(p >= 2.0 && std::isfinite(p), lemma, "p in [2, inf)");
    const MultiplierOp L = op_L(g);
    return run_ensemble(lemma, e, {{"p", p}}, [&](const Grid2D& grid, int i) {
        const DyadicPartition part(grid);
        const SpectralField f = random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i));
        Rows rows;
        for (int j : nonempty_blocks(part, f, 0, part.j_max())) {
            const SpectralField df_hat = part.delta(f, j);
            const RealField df = real_inverse(grid, df_hat);
            const RealField Ldf = real_inverse(grid, L(grid, df_hat));
            const double two_j = std::ldexp(1.0, j);
            const double lhs = two_j / g(two_j) * std::pow(lp_norm(grid, df, p), p);
            const double rhs = integral(grid, df.abs().pow(p - 2.0) * df * Ldf);
            rows.push_back({{i, j, lhs, rhs, lhs / rhs}, !(rhs > 0.0) || !std::isfinite(lhs / rhs)});
        }
        return rows;
    });
}

InequalityReport check_convolution_commutator(const EnsembleSpec& e,
                                              const ConvolutionCommutatorParams& c) {
    const std::string lemma = "convolution-commutator";
    require(c.delta > 0.0 && c.delta <= 1.0, lemma, "delta in (0, 1]");
    std::map<std::string, double> params{{"delta", c.delta}};
    if (c.delta < 1.0) {
        require(c.p1 >= 1.0 && c.p2 >= 1.0 && c.p3 >= 1.0, lemma, "p_i in [1, inf]");
        require(holder(c.p1, c.p2, c.p3), lemma, "1/p1 = 1/p2 + 1/p3");
        params.insert({{"p1", c.p1}, {"p2", c.p2}, {"p3", c.p3}});
    } else {
        require(c.p >= 1.0, lemma, "p in [1, inf]");
        require(c.r1 >= 1.0 && c.r1 <= c.p, lemma, "r1 in [1, p]");
        require(std::abs(recip(c.r1) + recip(c.r2) - 1.0) < 1e-12, lemma, "1/r1 + 1/r2 = 1");
        params.insert({{"p", c.p}, {"r1", c.r1}, {"r2", c.r2}});
    }
    require(c.j_lo >= 0 && c.j_hi >= c.j_lo, lemma, "0 <= j_lo <= j_hi");
    params["j_lo"] = c.j_lo;
    params["j_hi"] = c.j_hi;
    BesovNormSpec hom;
    hom.s = c.delta;
    hom.p = c.p2;
    hom.q = inf;
    hom.homogeneous = true;

    return run_ensemble(lemma, e, params, [&, hom](const Grid2D& grid, int i) {
        const DyadicPartition part(grid);
        require(c.j_hi <= part.j_max(), lemma, "j_hi <= j_max of the grid");
        const SpectralField f_hat = random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i, 0));
        const SpectralField g_hat = random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i, 1));
        const RealField f = real_inverse(grid, f_hat);
        const RealField g = real_inverse(grid, g_hat);
        const SpectralField fg = times(grid, f, g);
        const RealField dist = torus_distance(grid);
        double f_norm = 0.0, g_norm = 0.0, lhs_p = 0.0, moment_p = 0.0;
        if (c.delta < 1.0) {
            f_norm = besov_norm(part, f_hat, hom);
            g_norm = lp_norm(grid, g, c.p3);
            lhs_p = c.p1;
        } else {
            f_norm = lp_norm(grid, gradient_magnitude(grid, f_hat), c.p);
            g_norm = lp_norm(grid, g, c.r2);
            lhs_p = c.p;
            moment_p = c.r1;
        }
        Rows rows;
        for (int j = c.j_lo; j <= c.j_hi; ++j) {
            const SpectralField kernel_hat = part.weights(j).cast<std::complex<double>>() / grid.area();
            const RealField h = real_inverse(grid, kernel_hat);
            const double moment = c.delta < 1.0
                                      ? integral(grid, dist.pow(c.delta) * h.abs())
                                      : lp_norm(grid, dist * h, moment_p);
            const RealField commutator =
                real_inverse(grid, part.delta(fg, j)) - f * real_inverse(grid, part.delta(g_hat, j));
            const double lhs = lp_norm(grid, commutator, lhs_p);
            push_ratio(rows, i, j, lhs, moment * f_norm * g_norm, 0.0);
        }
        return rows;
    });
}

InequalityReport check_kato_ponce(const EnsembleSpec& e, const KatoPonceParams& k) {
    const std::string lemma = "kato-ponce";
    require(k.s > 0.0 && k.s <= 3.0, lemma, "s in (0, 3]");
    require(k.r > 1.0 && std::isfinite(k.r), lemma, "1 < r < inf");
    require(k.q1 > 1.0 && std::isfinite(k.q1) && k.p2 > 1.0 && std::isfinite(k.p2), lemma,
            "q1, p2 in (1, inf)");
    require(k.p1 >= 1.0 && k.q2 >= 1.0, lemma, "p1, q2 in [1, inf]");
    require(holder(k.r, k.p1, k.q1) && holder(k.r, k.p2, k.q2), lemma,
            "1/r = 1/p1 + 1/q1 = 1/p2 + 1/q2");
    const MultiplierOp lam = op_lambda(k.s);
    const MultiplierOp lam_m1 = op_lambda(k.s - 1.0);
    return run_ensemble(
        lemma, e, {{"s", k.s}, {"r", k.r}, {"p1", k.p1}, {"q1", k.q1}, {"p2", k.p2}, {"q2", k.q2}},
        [&](const Grid2D& grid, int i) {
            const SpectralField f_hat = random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i, 0));
            const SpectralField g_hat = random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i, 1));
            const RealField f = real_inverse(grid, f_hat);
            const RealField g = real_inverse(grid, g_hat);
            const RealField commutator = real_inverse(grid, lam(grid, times(grid, f, g))) -
                                         f * real_inverse(grid, lam(grid, g_hat));
            const double lhs = lp_norm(grid, commutator, k.r);
            const double rhs =
                lp_norm(grid, gradient_magnitude(grid, f_hat), k.p1) * norm(grid, lam_m1(grid, g_hat), k.q1) +
                norm(grid, lam(grid, f_hat), k.p2) * lp_norm(grid, g, k.q2);
            Rows rows;
            push_ratio(rows, i, -1, lhs, rhs, 0.0);
            return rows;
        });
}

InequalityReport check_rg_commutator(const EnsembleSpec& e, const SymbolG& g,
                                     const RgCommutatorParams& r) {
    const std::string lemma = "rg-commutator";
    require(r.p1 >= 2.0 && r.p2 >= 2.0 && r.p3 >= 2.0 && std::isfinite(r.p1) &&
                std::isfinite(r.p2) && std::isfinite(r.p3),
            lemma, "p_i in [2, inf)");
    require(holder(r.p1, r.p2, r.p3), lemma, "1/p1 = 1/p2 + 1/p3");
    require(r.q >= 1.0, lemma, "q in [1, inf]");
    require(r.s > 0.0 && r.s < r.delta, lemma, "0 < s < delta");
    const MultiplierOp rg = op_Rg(g);
    BesovNormSpec lhs_spec;
    lhs_spec.s = r.s;
    lhs_spec.p = r.p1;
    lhs_spec.q = r.q;
    lhs_spec.weight = {g, 1.0};
    BesovNormSpec u_spec;
    u_spec.s = r.delta;
    u_spec.p = r.p2;
    u_spec.q = inf;
    u_spec.homogeneous = true;
    BesovNormSpec F_spec;
    F_spec.s = r.s - r.delta;
    F_spec.p = r.p3;
    F_spec.q = r.q;
    F_spec.weight = {g, 2.0};
    return run_ensemble(
        lemma, e,
        {{"p1", r.p1}, {"p2", r.p2}, {"p3", r.p3}, {"q", r.q}, {"s", r.s}, {"delta", r.delta}},
        [&](const Grid2D& grid, int i) {
            const DyadicPartition part(grid);
            const SpectralField u_hat = random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i, 0));
            const SpectralField F_hat = random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i, 1));
            const RealField u = real_inverse(grid, u_hat);
            const RealField F = real_inverse(grid, F_hat);
            const SpectralField commutator =
                rg(grid, times(grid, u, F)) - times(grid, u, real_inverse(grid, rg(grid, F_hat)));
            const double lhs = besov_norm(part, commutator, lhs_spec);
            const double rhs = besov_norm(part, u_hat, u_spec) * besov_norm(part, F_hat, F_spec) +
                               std::sqrt(l2_norm_squared(grid, u_hat) * l2_norm_squared(grid, F_hat));
            Rows rows;
            push_ratio(rows, i, -1, lhs, rhs, 0.0);
            return rows;
        });
}

namespace {

void validate_interpolation(const std::string& lemma, const InterpolationParams& ip) {
    require(ip.beta > 2.0 && std::isfinite(ip.beta), lemma, "beta in (2, inf)");
    require(ip.s > 0.0 && ip.s < 1.0, lemma, "s in (0, 1)");
    const double e = ip.eps * (ip.beta - 2.0);
    require(e > 0.0 && e <= 2.0, lemma, "0 < eps (beta - 2) <= 2");
}

InequalityReport interpolation(const std::string& lemma, const EnsembleSpec& e,
                               const InterpolationParams& ip, bool besov_middle) {
    validate_interpolation(lemma, ip);
    const double a = 2.0 * ip.beta / (1.0 + ip.eps);
    const double denom = 2.0 - ip.eps * (ip.beta - 1.0);
    const double b = denom > 0.0 ? 2.0 * ip.beta / denom : inf;
    const double sob = ip.s + (1.0 - 2.0 / ip.beta) * (1.0 + ip.eps);
    BesovNormSpec mid;
    mid.s = ip.s;
    mid.p = b;
    mid.q = 2.0;
    mid.homogeneous = true;
    return run_ensemble(
        lemma, e,
        {{"beta", ip.beta}, {"s", ip.s}, {"eps", ip.eps}, {"lebesgue", a}, {"besov_p", b},
         {"sobolev_index", sob}},
        [&, mid](const Grid2D& grid, int i) {
            const DyadicPartition part(grid);
            const SpectralField f_hat = random_band_field(grid, e.k_lo, e.k_hi, e.rms, e.sample_seed(i));
            const RealField f = real_inverse(grid, f_hat);
            const SpectralField power = forward(grid, f.abs().pow(ip.beta - 2.0) * f);
            const double lhs = homogeneous_sobolev_norm(grid, power, ip.s);
            const double lead = std::pow(lp_norm(grid, f, a), ip.beta - 2.0);
            const double rhs = besov_middle ? lead * besov_norm(part, f_hat, mid)
                                            : lead * homogeneous_sobolev_norm(grid, f_hat, sob);
            Rows rows;
            push_ratio(rows, i, -1, lhs, rhs, 0.0);
            return rows;
        });
}

}  // namespace

InequalityReport check_interpolation_besov(const EnsembleSpec& e, const InterpolationParams& ip) {
    return interpolation("interpolation-besov", e, ip, true);
}

InequalityReport check_interpolation_sobolev(const EnsembleSpec& e, const InterpolationParams& ip) {
    return interpolation("interpolation-sobolev", e, ip, false);
}

namespace {

void finish_stability(StabilityReport& rep) {
    double lo = inf, hi = 0.0;
    bool clean = !rep.runs.empty();
    for (const auto& r : rep.runs) {
        clean = clean && r.ok() && r.empirical_constant > 0.0;
        lo = std::min(lo, r.empirical_constant);
        hi = std::max(hi, r.empirical_constant);
    }
    rep.spread = clean ? hi / lo : inf;
    rep.stable = clean && rep.spread <= 2.0;
}

}  // namespace

void StabilityReport::write_text(std::ostream& out) const {
    out << "stability." << lemma << ".spread=" << format(spread) << '\n';
    out << "stability." << lemma << ".stable=" << (stable ? 1 : 0) << '\n';
    for (const auto& r : runs) {
        out << "stability." << lemma << ".constant[n=" << r.n << ",seed=" << r.seed
            << "]=" << format(r.empirical_constant) << " violations=" << r.violations << '\n';
    }
}

StabilityReport check_stability(const EnsembleCheck& check, const EnsembleSpec& base,
                                std::uint64_t seed_a, std::uint64_t seed_b) {
    StabilityReport rep;
    for (auto [n, seed] : {std::pair{64, seed_a}, std::pair{128, seed_a}, std::pair{128, seed_b}}) {
        EnsembleSpec e = base;
        e.n = n;
        e.seed = seed;
        rep.runs.push_back(check(e));
    }
    rep.lemma = rep.runs.front().lemma;
    finish_stability(rep);
    return rep;
}

StabilityReport check_transport(std::uint64_t seed, double p) {
    struct Case {
        int n;
        bool source;
    };
    const Case cases[] = {{64, false}, {128, false}, {128, true}};
    StabilityReport rep;
    rep.lemma = "transport";
    for (int c = 0; c < 3; ++c) {
        SolverConfig config;
        config.n = cases[c].n;
        config.t_end = 0.5;
        config.seed = seed;
        config.ic.kind = ICSpec::Kind::random_band;
        config.ic.k_lo = 1.0;
        config.ic.k_hi = 4.0;
        config.physics.source = cases[c].source;
        config.transport_p = p;
        const RunResult run = run_simulation(config);
        InequalityReport r;
        r.lemma = "transport";
        r.n = config.n;
        r.seed = seed;
        r.ensemble_size = 1;
        r.params = {{"p", p}, {"source", cases[c].source ? 1.0 : 0.0}, {"t_end", config.t_end}};
        const TransportReport& t = run.transport;
        for (size_t i = 1; i < t.t.size(); ++i) {
            r.add({0, static_cast<int>(i), t.lhs[i], t.rhs[i], t.lhs[i] / t.rhs[i]}, false);
        }
        if (run.blew_up || !t.finite || t.t.size() < 2) {
            ++r.violations;
        }
        rep.runs.push_back(std::move(r));
    }
    finish_stability(rep);
    return rep;
}

}  // namespace rbsim
