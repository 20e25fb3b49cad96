// bbcodes: construct, characterize and search bivariate bicycle codes.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "bbcode/bbcode.hpp"

using namespace bbcode;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct CodeFlags {
    std::string octet;
    std::size_t ell = 0, m = 0;
    std::string a, b;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--octet", octet, "l,m,a1,a2,a3,b1,b2,b3 with a = x^a1+y^a2+y^a3, b = y^b1+x^b2+x^b3");
        cmd->add_option("--l", ell, "order of x");
        cmd->add_option("--m", m, "order of y");
        cmd->add_option("--a", a, "polynomial a in x, y (or z when gcd(l, m) = 1)");
        cmd->add_option("--b", b, "polynomial b in x, y (or z when gcd(l, m) = 1)");
    }

    BBCode code() const {
        if (!octet.empty()) {
            if (ell || m || !a.empty() || !b.empty()) throw UsageError("--octet cannot be combined with --l/--m/--a/--b");
            std::array<long, 8> o{};
            std::stringstream ss(octet);
            std::string item;
            std::size_t count = 0;
            while (std::getline(ss, item, ',')) {
                if (count == 8) throw UsageError("--octet takes exactly 8 integers");
                try {
                    std::size_t used = 0;
                    o[count] = std::stol(item, &used);
                    if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
                } catch (const std::logic_error&) {
                    throw UsageError("--octet: '" + item + "' is not an integer");
                }
                ++count;
            }
            if (count != 8) throw UsageError("--octet takes exactly 8 integers");
            return BBCode::from_octet(o);
        }
        if (!ell || !m || a.empty() || b.empty()) throw UsageError("give --octet or all of --l, --m, --a, --b");
        return parse_code(ell, m, a, b);
    }
};

std::pair<std::size_t, std::size_t> parse_range(const std::string& text, const char* flag) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const std::size_t v = std::stoul(text);
            return {v, v};
        }
        return {std::stoul(text.substr(0, colon)), std::stoul(text.substr(colon + 1))};
    } catch (const std::logic_error&) {
        throw UsageError(std::string(flag) + ": expected N or A:B, got '" + text + "'");
    }
}

std::string code_label(const BBCode& c) {
    return "l = " + std::to_string(c.ell) + ", m = " + std::to_string(c.m) + ", a = " + c.a.to_string() +
           ", b = " + c.b.to_string();
}

json report_json(const DimensionReport& r) {
    json j;
    j["k"] = r.k;
    j["method"] = to_string(r.method);
    j["witnesses"] = r.witness_strings();
    if (r.method == DimensionMethod::groebner) {
        std::vector<std::string> sm, lm;
        for (auto t : r.standard_monomials) sm.push_back(t.to_string());
        for (auto t : r.leading_monomials) lm.push_back(t.to_string());
        j["standard_monomials"] = sm;
        j["leading_monomials"] = lm;
    }
    return j;
}

// ----------------------------------------------------------------- factor

int cmd_factor(std::size_t n, bool cosets, bool as_json) {
    if (n < 1) throw UsageError("factor: n must be at least 1");
    const auto fac = factor_xn_minus_1(n);
    std::size_t odd = n;
    while (odd % 2 == 0) odd /= 2;
    if (as_json) {
        json j;
        j["n"] = n;
        j["factors"] = json::array();
        for (const auto& f : fac.factors)
            j["factors"].push_back({{"poly", f.poly.to_string('z')}, {"degree", f.poly.degree()}, {"multiplicity", f.multiplicity}});
        if (cosets) {
            j["coset_modulus"] = odd;
            j["cosets"] = json::array();
            for (const auto& c : cyclotomic_cosets(odd)) j["cosets"].push_back(c.members);
        }
        std::cout << j.dump() << "\n";
        return kExitOk;
    }
    std::cout << "z^" << n << " - 1 = ";
    for (const auto& f : fac.factors) {
        std::cout << "(" << f.poly.to_string('z') << ")";
        if (f.multiplicity > 1) std::cout << "^" << f.multiplicity;
    }
    std::cout << "\n" << fac.factors.size() << " distinct irreducible factors\n";
    if (cosets) {
        std::cout << "cyclotomic cosets mod " << odd;
        if (odd != n) std::cout << " (odd part of " << n << ")";
        std::cout << ":\n";
        for (const auto& c : cyclotomic_cosets(odd)) {
            std::cout << "  C_" << c.representative << " = {";
            for (std::size_t i = 0; i < c.members.size(); ++i) std::cout << (i ? ", " : "") << c.members[i];
            std::cout << "}\n";
        }
    }
    return kExitOk;
}

// -------------------------------------------------------------------- dim

int cmd_dim(const BBCode& code, const std::string& method, bool as_json) {
    std::vector<DimensionReport> reports;
    if (method == "auto") {
        if (coprime_applicable(code))
            reports.push_back(k_coprime(code));
        else if (one_sided_applicable(code))
            reports.push_back(k_one_sided(code));
        else
            reports.push_back(k_groebner(code));
    } else if (method == "coprime") {
        reports.push_back(k_coprime(code));
    } else if (method == "crt") {
        reports.push_back(k_one_sided(code));
    } else if (method == "groebner") {
        reports.push_back(k_groebner(code));
    } else if (method == "rank") {
        reports.push_back(k_rank(code));
    } else if (method == "all") {
        reports = k_cross_check(code).reports;
    } else {
        throw UsageError("dim: unknown --method '" + method + "'");
    }
    if (as_json) {
        json j;
        j["code"] = {{"ell", code.ell}, {"m", code.m}, {"a", code.a.to_string()}, {"b", code.b.to_string()}};
        j["n"] = code.n();
        j["k"] = reports.front().k;
        j["reports"] = json::array();
        for (const auto& r : reports) j["reports"].push_back(report_json(r));
        std::cout << j.dump() << "\n";
        return kExitOk;
    }
    std::cout << code_label(code) << "\n";
    std::cout << "n = " << code.n() << ", k = " << reports.front().k << "\n";
    for (const auto& r : reports) {
        std::cout << "[" << to_string(r.method) << "] k = " << r.k << "\n";
        for (const auto& w : r.witness_strings()) std::cout << "  " << w << "\n";
    }
    return kExitOk;
}

// --------------------------------------------------------------- distance

struct DistanceFlags {
    std::string method = "exact";
    std::uint64_t trials = 10'000;
    std::uint64_t seed = 0;
    std::size_t cap = kDefaultExactCap;
    std::size_t threads = 1;
    std::size_t depth = 3;
    std::size_t window = 40;
};

int cmd_distance(const BBCode& code, const DistanceFlags& f, bool as_json) {
    if (k_rank(code).k == 0) throw UsageError("distance: code has k = 0, no logical operators exist");
    DistanceResult r;
    if (f.method == "exact") {
        r = d_exact(code, f.cap);
        if (r.status == DistanceStatus::not_computed) throw UsageError("distance: " + r.note);
    } else if (f.method == "random") {
        RandomDistanceOptions o;
        o.trials = f.trials;
        o.seed = f.seed;
        o.threads = f.threads;
        o.depth = f.depth;
        o.window = f.window;
        r = d_random(code, o);
    } else {
        throw UsageError("distance: unknown --method '" + f.method + "'");
    }
    if (as_json) {
        json j;
        j["code"] = {{"ell", code.ell}, {"m", code.m}, {"a", code.a.to_string()}, {"b", code.b.to_string()}};
        j["n"] = code.n();
        j["d"] = r.d ? json(*r.d) : json(nullptr);
        j["d_status"] = to_string(r.status);
        j["trials"] = r.trials;
        j["seed"] = r.seed;
        j["witness_type"] = std::string(1, r.witness_type);
        j["witness_support"] = r.witness.support();
        std::cout << j.dump() << "\n";
        return kExitOk;
    }
    std::cout << code_label(code) << "\n";
    std::cout << "d = " << *r.d << " (" << to_string(r.status) << ")\n";
    std::cout << "witness: " << r.witness_type << "-type logical of weight " << r.witness.weight() << "\n";
    if (r.status == DistanceStatus::upper_bound) std::cout << "trials = " << r.trials << ", seed = " << r.seed << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- search

int cmd_search(SearchConfig cfg, const std::string& l_range, const std::string& m_range, const std::string& mode,
               const std::string& out_path) {
    std::tie(cfg.ell_min, cfg.ell_max) = parse_range(l_range, "--l");
    std::tie(cfg.m_min, cfg.m_max) = parse_range(m_range, "--m");
    if (mode == "coprime")
        cfg.mode = SearchMode::coprime;
    else if (mode == "quasi-cyclic" || mode == "quasi_cyclic")
        cfg.mode = SearchMode::quasi_cyclic;
    else if (mode == "auto")
        cfg.mode = SearchMode::auto_select;
    else
        throw UsageError("search: unknown --mode '" + mode + "'");
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        out = &file;
    }
    const auto st = search(cfg, [&](const CandidateRecord& r) { *out << to_json(r).dump() << "\n" << std::flush; });
    std::cerr << "pairs " << st.pairs << " (no good prime " << st.pairs_without_good_prime << ", outside mode "
              << st.pairs_outside_mode << "), examined " << st.examined << ", duplicates " << st.duplicates << ", k = 0 "
              << st.k_zero << ", rejected: k < 4 " << st.rejected_k_small << ", disconnected " << st.rejected_disconnected
              << ", semi-trivial " << st.rejected_semi_trivial << ", distance " << st.rejected_distance << "; emitted "
              << st.emitted << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- verify

int cmd_verify(const std::string& path, std::optional<std::uint64_t> trials, std::size_t threads, bool as_json) {
    std::vector<ManifestEntry> entries;
    try {
        entries = load_manifest(path);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    VerifyOptions opt;
    opt.trials = trials;
    opt.threads = threads;
    auto report = verify_manifest(entries, opt, [&](const EntryVerdict& v) {
        if (as_json) return;
        std::cout << (v.pass() ? "PASS" : "FAIL") << "  " << v.entry.name << "  k = " << v.k << " (expected "
                  << v.entry.expect_k << ")";
        if (v.distance.d) {
            std::cout << ", d = " << *v.distance.d << " [" << to_string(v.distance.status) << "]";
            if (v.entry.expect_d) std::cout << " (expected " << *v.entry.expect_d << " +- " << v.tolerance << ")";
        }
        if (!v.message.empty()) std::cout << "  -- " << v.message;
        std::cout << std::endl;
    });
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    if (as_json) {
        json j;
        j["pass"] = report.all_pass();
        j["warnings"] = report.warnings;
        j["entries"] = json::array();
        for (const auto& v : report.entries) j["entries"].push_back(to_json(v));
        std::cout << j.dump() << "\n";
    } else {
        std::size_t passed = 0;
        for (const auto& v : report.entries) passed += v.pass();
        std::cout << passed << "/" << report.entries.size() << " entries pass\n";
    }
    return report.all_pass() ? kExitOk : kExitFail;
}

// ----------------------------------------------------------------- export

int cmd_export(const BBCode& code, const std::string& format, const std::string& out, bool as_json) {
    if (format != "alist") throw UsageError("export: unsupported --format '" + format + "'");
    if (out.empty()) throw UsageError("export: --out is required");
    const auto h = build_checks(code);
    const std::string hx_path = out + "_hx.alist", hz_path = out + "_hz.alist";
    for (auto [path, mat] : {std::pair{hx_path, &h.hx}, std::pair{hz_path, &h.hz}}) {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << export_alist(*mat);
        if (!f) throw std::runtime_error("write failed for " + path);
    }
    if (as_json)
        std::cout << json{{"hx", hx_path}, {"hz", hz_path}}.dump() << "\n";
    else
        std::cout << "wrote " << hx_path << "\nwrote " << hz_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Construct, characterize and search bivariate bicycle codes"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    std::size_t factor_n = 0;
    bool cosets = false;
    auto* factor = app.add_subcommand("factor", "factor z^n - 1 over GF(2)");
    factor->add_option("n", factor_n, "exponent n")->required();
    factor->add_flag("--cosets", cosets, "also list cyclotomic cosets");

    CodeFlags dim_code;
    std::string dim_method = "auto";
    auto* dim = app.add_subcommand("dim", "code dimension k");
    dim_code.add_to(dim);
    dim->add_option("--method", dim_method, "auto|coprime|crt|groebner|rank|all");

    CodeFlags dist_code;
    DistanceFlags dist_flags;
    auto* distance = app.add_subcommand("distance", "minimum distance d");
    dist_code.add_to(distance);
    distance->add_option("--method", dist_flags.method, "exact|random");
    distance->add_option("--trials", dist_flags.trials, "random trials per side");
    distance->add_option("--seed", dist_flags.seed, "random seed");
    distance->add_option("--cap", dist_flags.cap, "largest kernel dimension for exact search");
    distance->add_option("--threads", dist_flags.threads, "worker threads for random search");
    distance->add_option("--depth", dist_flags.depth, "row combinations scanned per trial (1-3)");
    distance->add_option("--window", dist_flags.window, "rows used for combinations");

    SearchConfig cfg;
    std::string l_range = "1", m_range = "1", mode = "auto", out_path;
    bool no_distance = false, allow_semi = false, allow_disconnected = false, allow_small_k = false;
    auto* srch = app.add_subcommand("search", "enumerate candidate codes as JSON lines");
    srch->add_option("--l", l_range, "l or range A:B")->required();
    srch->add_option("--m", m_range, "m or range A:B")->required();
    srch->add_option("--mode", mode, "coprime|quasi-cyclic|auto");
    srch->add_option("--out", out_path, "output file (default stdout)");
    srch->add_option("--max-candidates", cfg.max_candidates, "candidates evaluated per (l, m); 0 for no limit");
    srch->add_option("--max-examined", cfg.max_examined, "raw candidates generated per (l, m); 0 for no limit");
    srch->add_option("--trials", cfg.distance_trials, "random distance trials");
    srch->add_option("--screen-trials", cfg.screen_trials, "screening trials when --min-distance is set");
    srch->add_option("--min-distance", cfg.min_distance, "drop candidates with smaller distance");
    srch->add_option("--cap", cfg.exact_cap, "largest kernel dimension for exact distance");
    srch->add_option("--seed", cfg.seed, "random seed");
    srch->add_option("--threads", cfg.threads, "worker threads for candidate evaluation");
    srch->add_flag("--no-distance", no_distance, "skip distance evaluation");
    srch->add_flag("--allow-semi-trivial", allow_semi, "keep semi-trivial candidates");
    srch->add_flag("--allow-disconnected", allow_disconnected, "keep disconnected candidates");
    srch->add_flag("--allow-small-k", allow_small_k, "keep candidates with 0 < k < 4");

    std::string manifest;
    std::optional<std::uint64_t> verify_trials;
    std::size_t verify_threads = 1;
    auto* verify = app.add_subcommand("verify", "check a manifest of known codes");
    verify->add_option("--manifest", manifest, "JSON manifest")->required();
    verify->add_option("--trials", verify_trials, "override every entry's random trial budget");
    verify->add_option("--threads", verify_threads, "worker threads for random search");

    CodeFlags exp_code;
    std::string exp_format = "alist", exp_out;
    auto* exp = app.add_subcommand("export", "write H_X and H_Z");
    exp_code.add_to(exp);
    exp->add_option("--format", exp_format, "alist");
    exp->add_option("--out", exp_out, "output prefix; writes <out>_hx.alist and <out>_hz.alist");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*factor) return cmd_factor(factor_n, cosets, as_json);
        if (*dim) return cmd_dim(dim_code.code(), dim_method, as_json);
        if (*distance) return cmd_distance(dist_code.code(), dist_flags, as_json);
        if (*srch) {
            cfg.compute_distance = !no_distance;
            cfg.reject_semi_trivial = !allow_semi;
            cfg.require_connected = !allow_disconnected;
            cfg.require_k4 = !allow_small_k;
            return cmd_search(cfg, l_range, m_range, mode, out_path);
        }
        if (*verify) return cmd_verify(manifest, verify_trials, verify_threads, as_json);
        if (*exp) return cmd_export(exp_code.code(), exp_format, exp_out, as_json);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
