#pragma once

// Text and JSON I/O: the polynomial expression grammar, system / variety /
// experiment-config documents, and the CSV/JSON report renderers used by the
// command line tool.
//
// Polynomial grammar (whitespace-insensitive):
//   poly   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := integer | var ['^' posint]
// Repeated variable factors multiply (exponents add), repeated integer factors
// multiply into the coefficient. U+2212 is accepted for '-'. Serialization is
// canonical: terms in descending lexicographic exponent order, coefficient
// magnitudes with sign-absorbing separators, unit coefficients elided.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tridyn/bounds.hpp"
#include "tridyn/dynmodp.hpp"
#include "tridyn/iterate.hpp"
#include "tridyn/trisys.hpp"

namespace tridyn {

// Lexical/syntactic failure in polynomial text or a JSON document. offset is a
// byte index into the original input; line/col are 1-based.
struct ParseError : std::runtime_error {
    size_t offset = 0;
    int line = 1;
    int col = 1;
    std::string expected;

    ParseError(const std::string& input, size_t off, std::string what_expected);
};

// Structurally valid JSON whose shape violates a document schema (wrong arity,
// unknown variable, e outside {-1,1}, zero last-level lead, bad field types).
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- polynomial text ---------------------------------------------------------

ZPoly parse_polynomial(const std::string& text, const std::vector<std::string>& vars);
std::string serialize_polynomial(const ZPoly& f, const std::vector<std::string>& vars);

// --- JSON documents ----------------------------------------------------------

// {"n": 2, "vars": ["X1","X2"], "levels": [{"e","G","H"}..., {"e","g","h"}]}
// vars is optional (defaults X1..Xn); g/h accept integers or decimal strings.
// Dominance-shape checking is NOT run here; callers route the result through
// validate_system so shape violations surface as ConditionViolation values.
TriangularSystem parse_system(const std::string& json_text);
std::string serialize_system(const TriangularSystem& sys);

// {"polys": ["X1 - X2", ...]} read in the supplied variables
Variety parse_variety(const std::string& json_text, const std::vector<std::string>& vars);
std::string serialize_variety(const Variety& V, const std::vector<std::string>& vars);

struct ExperimentConfig {
    uint64_t prime_lo = 3;
    uint64_t prime_hi = 31;
    uint64_t k_lo = 1;
    uint64_t k_hi = 3;
    uint64_t ell = 64;
    double epsilon = 0.25;
    uint64_t seed = 0;
    uint64_t maxlen = 4096;
    uint64_t scan_cap = kScanCap;
    uint64_t term_guard = kDefaultTermGuard;
};

// {"primes":[lo,hi],"k":[lo,hi],"ell":..,"epsilon":..,"seed":..,"maxlen":..,
//  "scan_cap":..,"term_guard":..}; every key optional, unknown keys rejected.
ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& cfg);

// --- report rendering --------------------------------------------------------

enum class ReportFormat { Csv, Json };

// Number formatting shared by every renderer: integers exact, doubles printed
// with 15 significant digits ("%.15g", locale-independent).
std::string fmt_double(double x);

// RFC 4180 field quoting (applied only when the field needs it)
std::string csv_escape(const std::string& field);

std::string render_growth(const GrowthReport& rep, ReportFormat fmt);

// bf_counts, when given, is aligned with rows: an independent brute-force count
// per row, -1 where the check was skipped. Disagreement with count_fp shows up
// as an "engine_mismatch" flag (CSV) / "count_bruteforce" field (JSON).
std::string render_periodic(const std::vector<PeriodicCountRow>& rows,
                            const StabilizationSummary* stab, ReportFormat fmt,
                            const std::vector<int64_t>* bf_counts = nullptr);

std::string render_orbit(const OrbitRecord<PrimeFieldCtx>& rec, uint64_t p,
                         const std::vector<std::string>& vars, ReportFormat fmt);

std::string render_hits(const std::vector<HitFreqRow>& rows, double epsilon,
                        ReportFormat fmt);

std::string render_bounds(const std::optional<NullstellensatzBound>& nb,
                          const std::vector<TheoremFragment>& frags, ReportFormat fmt);

std::string render_gap(const GapResult& g, ReportFormat fmt);

// Throws std::runtime_error when the destination cannot be opened or written.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace tridyn
