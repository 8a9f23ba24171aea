#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rbsim/lemmas.hpp"

namespace rbsim {

/// One scalar property check: `value` compared with `threshold` under `rule`.
struct CheckResult {
    enum class Rule { at_most, at_least, within, flag };
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    double upper = 0.0;  ///< second bound for Rule::within
    Rule rule = Rule::at_most;
    bool pass = false;

    static CheckResult at_most(std::string name, double value, double threshold);
    static CheckResult at_least(std::string name, double value, double threshold);
    static CheckResult within(std::string name, double value, double lo, double hi);
    static CheckResult flag(std::string name, bool ok, double value = 0.0);
};

std::ostream& operator<<(std::ostream& out, const CheckResult& c);

struct SuiteOutput {
    std::string suite;
    std::vector<CheckResult> checks;
    std::vector<InequalityReport> reports;
    std::vector<StabilityReport> stability;

    /// Zero violations: every check passes, every report is clean and every
    /// stability study is stable.
    bool ok() const;
    void write_text(std::ostream& out) const;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int n = 128;
    int threads = 1;
};

SuiteOutput verify_operators(const VerifyOptions& opt);
SuiteOutput verify_symbols(const VerifyOptions& opt);
SuiteOutput verify_partition(const VerifyOptions& opt);
SuiteOutput verify_bernstein(const VerifyOptions& opt);
SuiteOutput verify_positivity(const VerifyOptions& opt);
SuiteOutput verify_commutators(const VerifyOptions& opt);
SuiteOutput verify_interpolation(const VerifyOptions& opt);
SuiteOutput verify_transport(const VerifyOptions& opt);

const std::vector<std::string>& suite_names();  ///< without "all"
/// Runs one named suite, or every suite for "all". Throws ConfigError for an
/// unknown name.
std::vector<SuiteOutput> run_suite(const std::string& name, const VerifyOptions& opt);

}  // namespace rbsim
