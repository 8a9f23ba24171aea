#include "rbsim/verify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "rbsim/littlewood_paley.hpp"
#include "rbsim/multiplier.hpp"
#include "rbsim/spectral.hpp"
#include "rbsim/symbol.hpp"

namespace rbsim {

namespace {

double max_abs(const SpectralField& f) { return f.abs().maxCoeff(); }

double rel_diff(const SpectralField& a, const SpectralField& b) {
    const double scale = std::max(max_abs(b), 1e-300);
    return max_abs(a - b) / scale;
}

RealField white_noise(const Grid2D& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RealField out(grid.n(), grid.n());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out(i) = u(rng);
    }
    return out;
}

EnsembleSpec ensemble(const VerifyOptions& opt, int size = 100) {
    EnsembleSpec e;
    e.n = opt.n;
    e.seed = opt.seed;
    e.size = size;
    e.threads = opt.threads;
    return e;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

CheckResult CheckResult::at_most(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, 0.0, Rule::at_most, value <= threshold};
}

CheckResult CheckResult::at_least(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, 0.0, Rule::at_least, value >= threshold};
}

CheckResult CheckResult::within(std::string name, double value, double lo, double hi) {
    return {std::move(name), value, lo, hi, Rule::within, value >= lo && value <= hi};
}

CheckResult CheckResult::flag(std::string name, bool ok, double value) {
    return {std::move(name), value, 0.0, 0.0, Rule::flag, ok};
}

std::ostream& operator<<(std::ostream& out, const CheckResult& c) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << fmt(c.value);
    switch (c.rule) {
        case CheckResult::Rule::at_most:
            out << " <= " << fmt(c.threshold);
            break;
        case CheckResult::Rule::at_least:
            out << " >= " << fmt(c.threshold);
            break;
        case CheckResult::Rule::within:
            out << " in [" << fmt(c.threshold) << ", " << fmt(c.upper) << "]";
            break;
        case CheckResult::Rule::flag:
            break;
    }
    return out;
}

bool SuiteOutput::ok() const {
    for (const auto& c : checks) {
        if (!c.pass) {
            return false;
        }
    }
    for (const auto& r : reports) {
        if (!r.ok()) {
            return false;
        }
    }
    for (const auto& s : stability) {
        if (!s.stable) {
            return false;
        }
    }
    return true;
}

void SuiteOutput::write_text(std::ostream& out) const {
    out << "suite=" << suite << '\n';
    for (const auto& c : checks) {
        out << c << '\n';
    }
    for (const auto& r : reports) {
        r.write_text(out);
    }
    for (const auto& s : stability) {
        s.write_text(out);
    }
    out << "suite." << suite << ".result=" << (ok() ? "PASS" : "FAIL") << '\n';
}

SuiteOutput verify_operators(const VerifyOptions& opt) {
    SuiteOutput out;
    out.suite = "operators";
    const Grid2D grid(opt.n);
    double roundtrip = 0.0;
    for (int i = 0; i < 3; ++i) {
        const RealField f = white_noise(grid, opt.seed + static_cast<std::uint64_t>(i));
        const RealField back = inverse(grid, forward(grid, f));
        roundtrip = std::max(roundtrip, (back - f).abs().maxCoeff() / f.abs().maxCoeff());
    }
    out.checks.push_back(CheckResult::at_most("transform round trip", roundtrip, 1e-12));

    const SpectralField f = random_band_field(grid, 1.0, grid.n() / 2 - 1, 1.0, opt.seed);
    const double parseval = std::abs(std::pow(lp_norm(grid, real_inverse(grid, f), 2.0), 2) -
                                     l2_norm_squared(grid, f)) /
                            l2_norm_squared(grid, f);
    out.checks.push_back(CheckResult::at_most("Parseval", parseval, 1e-10));
    const SpectralField d = dealias(grid, f);
    out.checks.push_back(CheckResult::flag("dealias idempotent", (dealias(grid, d).array() == d.array()).all()));

    for (const SymbolG& g : {SymbolG::log(1.0), SymbolG::loglog(1.0)}) {
        const std::string tag = " [" + g.spec() + "]";
        const MultiplierOp L = op_L(g), Lh = op_L_half(g), Rg = op_Rg(g);
        out.checks.push_back(CheckResult::at_most("L R_g = d1" + tag, rel_diff(L(grid, Rg(grid, f)), partial1(grid, f)), 1e-12));
        out.checks.push_back(CheckResult::at_most("L^1/2 L^1/2 = L" + tag, rel_diff(Lh(grid, Lh(grid, f)), L(grid, f)), 1e-12));
        const SpectralField p1 = linear_propagator(g, 0.3)(grid, linear_propagator(g, 0.45)(grid, f));
        out.checks.push_back(CheckResult::at_most("propagator semigroup" + tag, rel_diff(p1, linear_propagator(g, 0.75)(grid, f)), 1e-12));
        out.checks.push_back(CheckResult::at_most("L and R_g commute" + tag, rel_diff(L(grid, Rg(grid, f)), Rg(grid, L(grid, f))), 1e-12));
        const SpectralField Lf = L(grid, f);
        out.checks.push_back(CheckResult::at_most("L preserves realness" + tag, hermitian_defect(grid, Lf).max_defect / max_abs(Lf), 1e-12));
    }
    const SpectralField a = op_L(SymbolG::constant(1.0)).symbol_on(grid);
    const SpectralField b = op_lambda(1.0).symbol_on(grid);
    out.checks.push_back(CheckResult::flag("L with g=1 equals Lambda^1", (a.array() == b.array()).all()));
    for (const auto& c : verify_symbols(opt).checks) {
        out.checks.push_back(c);
    }
    return out;
}

SuiteOutput verify_symbols(const VerifyOptions&) {
    SuiteOutput out;
    out.suite = "symbols";
    const double k_max = 1e4;
    for (const SymbolG& g : {SymbolG::log(1.0), SymbolG::loglog(1.0), SymbolG::constant(1.0)}) {
        const SymbolReport r = validate_symbol(g, k_max);
        out.checks.push_back(CheckResult::flag("symbol " + g.spec() + " passes (a)", r.condition_a.pass, r.condition_a.min_g));
        out.checks.push_back(CheckResult::flag("symbol " + g.spec() + " passes (b)", r.condition_b.pass, r.condition_b.constant()));
        out.checks.push_back(CheckResult::flag("symbol " + g.spec() + " passes (c)", r.condition_c.pass, r.condition_c.max_tail_slope));
    }
    // g(r) = r: grows like a power, so g/r^sigma cannot decrease
    std::vector<double> r{0.0}, gv{0.0};
    for (int i = 0; i <= 400; ++i) {
        r.push_back(std::pow(10.0, -3.0 + 7.5 * i / 400.0));
        gv.push_back(r.back());
    }
    const SymbolReport lin = validate_symbol(SymbolG::tabulated(r, gv, "g(r)=r"), k_max);
    out.checks.push_back(CheckResult::flag("fixture g(r)=r fails (c)", !lin.condition_c.pass, lin.condition_c.max_tail_slope));
    return out;
}

SuiteOutput verify_partition(const VerifyOptions& opt) {
    SuiteOutput out;
    out.suite = "partition";
    const Grid2D grid(opt.n);
    const DyadicPartition part(grid);
    out.checks.push_back(CheckResult::at_most("partition of unity on dealiased band", part.partition_defect(), 1e-12));

    const SpectralField f = dealias(grid, random_band_field(grid, 0.0, grid.n() / 2 - 1, 1.0, opt.seed));
    SpectralField sum = SpectralField::Zero(grid.n(), grid.n());
    double telescope = 0.0;
    for (int j = -1; j <= part.j_max(); ++j) {
        sum += part.delta(f, j);
        if (j >= 0) {
            const SpectralField diff = part.low_pass(f, j + 1) - part.low_pass(f, j) - part.delta(f, j);
            telescope = std::max(telescope, max_abs(diff) / max_abs(f));
        }
    }
    out.checks.push_back(CheckResult::at_most("block reconstruction", rel_diff(sum, f), 1e-12));
    out.checks.push_back(CheckResult::at_most("S_{j+1} - S_j = Delta_j", telescope, 1e-12));
    out.checks.push_back(CheckResult::at_most("S_{j_max+1} f = f", rel_diff(part.low_pass(f, part.j_max() + 1), f), 1e-12));

    double overlap = 0.0;
    for (int j = -1; j <= part.j_max(); ++j) {
        for (int jj = j + 2; jj <= part.j_max(); ++jj) {
            overlap = std::max(overlap, (part.weights(j) * part.weights(jj)).maxCoeff());
        }
    }
    out.checks.push_back(CheckResult::at_most("blocks two apart are disjoint", overlap, 0.0));

    const SpectralField mode = cosine_mode(grid, 3, 0);
    double single = 0.0;
    for (int j = -1; j <= part.j_max(); ++j) {
        single = std::max(single, max_abs(part.delta(mode, j) - (j == 1 ? mode : SpectralField::Zero(grid.n(), grid.n()))));
    }
    out.checks.push_back(CheckResult::at_most("mode (3,0) lies in block 1 only", single, 1e-15));

    for (double s : {0.5, 1.0, 2.0}) {
        double lo = INFINITY, hi = 0.0;
        BesovNormSpec spec;
        spec.s = s;
        spec.p = 2.0;
        spec.q = 2.0;
        for (int i = 0; i < 100; ++i) {
            const SpectralField h = random_band_field(grid, 1.0, grid.n() / 3.0, 1.0,
                                                      opt.seed * 7919 + static_cast<std::uint64_t>(i));
            const double ratio = besov_norm(part, h, spec) / sobolev_norm(grid, h, s);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        out.checks.push_back(CheckResult::at_least("B^s_22 / H^s min, s=" + fmt(s), lo, 0.25));
        out.checks.push_back(CheckResult::at_most("B^s_22 / H^s max, s=" + fmt(s), hi, 4.0));
    }

    const SpectralField u = random_band_field(grid, 0.0, grid.n() / 3.0, 1.0, opt.seed + 11);
    const SpectralField v = random_band_field(grid, 0.0, grid.n() / 3.0, 1.0, opt.seed + 12);
    const BonyParts bp = bony_decompose(part, u, v);
    out.checks.push_back(CheckResult::at_most("paraproduct reconstruction",
                                              rel_diff(bp.low_high + bp.high_low + bp.remainder, product(grid, u, v, true)), 1e-10));
    return out;
}

SuiteOutput verify_bernstein(const VerifyOptions& opt) {
    SuiteOutput out;
    out.suite = "bernstein";
    const EnsembleSpec e = ensemble(opt);
    const SymbolG g = SymbolG::log(1.0);
    const std::uint64_t a = opt.seed, b = opt.seed + 1000;
    out.stability.push_back(check_stability([](const EnsembleSpec& s) { return check_bernstein_lowpass(s, {}); }, e, a, b));
    out.stability.push_back(check_stability([](const EnsembleSpec& s) { return check_bernstein_upper(s, {}); }, e, a, b));
    out.stability.push_back(check_stability([](const EnsembleSpec& s) { return check_bernstein_lower(s, {}); }, e, a, b));
    for (double p : {2.0, 3.0, 4.0}) {
        out.stability.push_back(check_stability(
            [&g, p](const EnsembleSpec& s) { return check_dissipative_bernstein(s, g, p); }, e, a, b));
    }
    EnsembleSpec flat = e;
    const InequalityReport classical = check_dissipative_bernstein(flat, SymbolG::constant(1.0), 2.0);
    out.checks.push_back(CheckResult::at_most("dissipative Bernstein g=1, p=2 constant", classical.empirical_constant, 4.0 / 3.0));
    return out;
}

SuiteOutput verify_positivity(const VerifyOptions& opt) {
    SuiteOutput out;
    out.suite = "positivity";
    const EnsembleSpec e = ensemble(opt);
    const SymbolG g = SymbolG::log(1.0);
    for (double p : {2.0, 3.0, 4.0}) {
        out.reports.push_back(check_positivity_pointwise(e, g, p));
        out.reports.push_back(check_positivity_integral(e, g, p));
    }
    return out;
}

SuiteOutput verify_commutators(const VerifyOptions& opt) {
    SuiteOutput out;
    out.suite = "commutators";
    const EnsembleSpec e = ensemble(opt);
    const std::uint64_t a = opt.seed, b = opt.seed + 1000;
    const SymbolG g = SymbolG::log(1.0);
    out.stability.push_back(check_stability([](const EnsembleSpec& s) { return check_convolution_commutator(s, {}); }, e, a, b));
    ConvolutionCommutatorParams lip;
    lip.delta = 1.0;
    out.stability.push_back(check_stability([lip](const EnsembleSpec& s) { return check_convolution_commutator(s, lip); }, e, a, b));
    out.stability.push_back(check_stability([](const EnsembleSpec& s) { return check_kato_ponce(s, {}); }, e, a, b));
    out.stability.push_back(check_stability([&g](const EnsembleSpec& s) { return check_rg_commutator(s, g, {}); }, e, a, b));

    // [Lambda^s, c] h = 0 for a constant c
    const Grid2D grid(opt.n);
    const MultiplierOp lam = op_lambda(1.0);
    const SpectralField h = random_band_field(grid, 1.0, 8.0, 1.0, opt.seed);
    const SpectralField c = cosine_mode(grid, 0, 0, 2.5);
    const SpectralField comm = lam(grid, product(grid, c, h, false)) - 2.5 * lam(grid, h);
    out.checks.push_back(CheckResult::at_most("Kato-Ponce commutator with constant", max_abs(comm) / max_abs(lam(grid, h)), 1e-12));
    return out;
}

SuiteOutput verify_interpolation(const VerifyOptions& opt) {
    SuiteOutput out;
    out.suite = "interpolation";
    const EnsembleSpec e = ensemble(opt, 200);
    const std::uint64_t a = opt.seed, b = opt.seed + 1000;
    out.stability.push_back(check_stability([](const EnsembleSpec& s) { return check_interpolation_besov(s, {}); }, e, a, b));
    out.stability.push_back(check_stability([](const EnsembleSpec& s) { return check_interpolation_sobolev(s, {}); }, e, a, b));
    return out;
}

SuiteOutput verify_transport(const VerifyOptions& opt) {
    SuiteOutput out;
    out.suite = "transport";
    out.stability.push_back(check_transport(opt.seed, std::numeric_limits<double>::infinity()));
    return out;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"operators",   "partition",     "bernstein", "positivity",
                                                "commutators", "interpolation", "transport"};
    return names;
}

std::vector<SuiteOutput> run_suite(const std::string& name, const VerifyOptions& opt) {
    using Fn = SuiteOutput (*)(const VerifyOptions&);
    static const std::vector<std::pair<std::string, Fn>> table{
        {"operators", verify_operators},     {"partition", verify_partition},
        {"bernstein", verify_bernstein},     {"positivity", verify_positivity},
        {"commutators", verify_commutators}, {"interpolation", verify_interpolation},
        {"transport", verify_transport}};
    std::vector<SuiteOutput> out;
    for (const auto& [suite, fn] : table) {
        if (name == "all" || name == suite) {
            out.push_back(fn(opt));
        }
    }
    if (out.empty()) {
        std::string known;
        for (const auto& s : suite_names()) {
            known += s + ", ";
        }
        throw ConfigError("unknown suite '" + name + "' (known: " + known + "all)");
    }
    return out;
}

}  // namespace rbsim
