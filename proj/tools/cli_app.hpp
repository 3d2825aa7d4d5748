#pragma once

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "altbase/altbase.hpp"

namespace altbase::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr double kSamplesPerUnit = 2048.0;

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitParse = 2,
    kExitDomain = 3,
    kExitNumeric = 4,
    kExitResource = 5,
};

// I/O problem writing a requested output file.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string real(double v) { return fmt::format("{:.17g}", v); }

inline std::string real_list(const std::vector<double>& values) {
    std::string s = "[";
    for (std::size_t k = 0; k < values.size(); ++k) s += (k ? ", " : "") + real(values[k]);
    return s + "]";
}

namespace detail {

struct Options {
    std::string base;
    bool json = false;
    std::string x;
    std::string mode = "greedy";
    std::size_t digits = 10;
    std::size_t slot = 0;
    std::optional<std::size_t> truncation;
    std::optional<std::size_t> samples;
    std::string csv;
    std::string interval;
    int digit = 0;
    std::optional<std::uint64_t> empirical;
    std::optional<std::string> x0;
    std::optional<std::uint64_t> seed;
    std::size_t steps = 20;
    bool lazy = false;
    std::optional<std::size_t> graph_slot;
};

inline Json envelope(const std::string& command, const AlternateBase& base) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["base"] = std::vector<double>(base.betas().begin(), base.betas().end());
    j["payload"] = Json::object();
    return j;
}

inline double parse_real(const std::string& text) { return parse_expression(text).value; }

inline std::uint64_t resolve_seed(const Options& o) {
    if (o.seed) return *o.seed;
    if (const char* env = std::getenv("ALTBASE_SEED")) {
        std::uint64_t v = 0;
        const std::string s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("ALTBASE_SEED is not an unsigned integer", 0);
        return v;
    }
    return 0;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw OutputError("cannot open " + path + " for writing");
    f << content;
    if (!f) throw OutputError("failed writing " + path);
}

// PATH with `suffix` inserted before the extension: plot.csv -> plot_greedy.csv.
inline std::string suffixed(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    const auto ext = p.extension().string();
    p.replace_extension();
    return p.string() + suffix + ext;
}

// Uniform grid at `per_unit` points per unit length plus both sides of each cut.
// Greedy domains are [lo, hi), lazy ones (lo, hi].
inline std::vector<double> sample_points(double lo, double hi, const std::vector<double>& cuts, double per_unit,
                                         bool right_closed) {
    const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil(per_unit * (hi - lo))));
    std::vector<double> xs;
    xs.reserve(n + 2 * cuts.size());
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(right_closed ? k + 1 : k) / static_cast<double>(n);
        xs.push_back(lo + (hi - lo) * t);
    }
    for (double c : cuts) {
        for (double x : {c - kSnapEps, c + kSnapEps}) {
            const bool inside = right_closed ? (x > lo && x <= hi) : (x >= lo && x < hi);
            if (inside) xs.push_back(x);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

inline std::string graph_csv(const AlternateBase& base, const std::vector<std::size_t>& slots, bool lazy,
                             double per_unit) {
    std::string csv = "x,y,branch_index,slot\n";
    for (std::size_t i : slots) {
        const auto pos = static_cast<long long>(i);
        const double beta = base.beta(pos);
        const int m = base.alphabet(pos);
        const double top = base.xmax(pos);
        std::vector<double> cuts;
        for (int d = 0; d < m; ++d) cuts.push_back(lazy ? (d + base.xmax(pos + 1)) / beta : (d + 1) / beta);
        for (double x : sample_points(0.0, top, cuts, per_unit, lazy)) {
            const auto r = lazy ? lazy_step(base, {i, x}) : greedy_step(base, {i, x});
            csv += fmt::format("{:.17g},{:.17g},{},{}\n", x, r.state.value, r.digit, i);
        }
    }
    return csv;
}

inline std::string density_csv(const DensitySpec& spec, const PiecewiseLinearMap& map, std::optional<std::size_t> samples) {
    std::vector<double> cuts = map.breakpoints();
    for (const auto& row : spec.orbit) cuts.insert(cuts.end(), row.begin(), row.end());
    const double per_unit = samples ? static_cast<double>(*samples) : kSamplesPerUnit;
    std::string csv = "x,density\n";
    for (double x : sample_points(0.0, 1.0, cuts, per_unit, false)) {
        csv += fmt::format("{:.17g},{:.17g}\n", x, density_eval(spec, x));
    }
    return csv;
}

class Runner {
public:
    Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

    void expand() {
        const auto base = make_base();
        const double x = parse_real(o_.x);
        if (o_.mode != "greedy" && o_.mode != "lazy") throw ParseError("--mode must be greedy or lazy", 0);
        const bool lazy = o_.mode == "lazy";
        const auto w = lazy ? lazy_expand(base, x, o_.digits) : greedy_expand(base, x, o_.digits);
        const double value = evaluate(base, w);
        const double bound = lazy ? max_tail(base, o_.digits) : 1.0 / base.partial_product(0, o_.digits);
        if (o_.json) {
            auto j = envelope("expand", base);
            j["payload"] = {{"x", x}, {"mode", o_.mode}, {"digits", w.digits}, {"value", value}, {"residual_bound", bound}};
            emit(j);
            return;
        }
        out_ << w.to_string() << "\n";
        out_ << "value=" << real(value) << "\n";
        out_ << "residual_bound=" << real(bound) << "\n";
    }

    void density() {
        const auto base = make_base();
        check_slot(base, o_.slot);
        const auto map = compose_map(base, o_.slot);
        const auto spec = gora_density(map, o_.truncation);
        if (!o_.csv.empty()) write_file(o_.csv, density_csv(spec, map, o_.samples));
        if (o_.json) {
            auto j = envelope("density", base);
            j["payload"] = {{"slot", o_.slot}, {"K", spec.K}, {"c", spec.c},  {"d", spec.d},
                            {"C", spec.C},     {"B", spec.B}, {"M", spec.M}};
            emit(j);
            return;
        }
        if (spec.K == 0) {
            out_ << "K=0, density=1\n";
            return;
        }
        out_ << "K=" << spec.K << ", C=" << real(spec.C) << "\n";
        out_ << "c=" << real_list(spec.c) << "\n";
        out_ << "d=" << real_list(spec.d) << "\n";
        out_ << "M=" << spec.M << "\n";
    }

    void measure() {
        const auto base = make_base();
        check_slot(base, o_.slot);
        const auto ends = parse_expression_list(o_.interval);
        if (ends.size() != 2) throw ParseError("--interval needs exactly two values a,b", 0);
        const InvariantMeasure mu(base);
        const double v = measure_interval(mu.slot(o_.slot), ends[0].value, ends[1].value);
        if (o_.json) {
            auto j = envelope("measure", base);
            j["payload"] = {{"slot", o_.slot}, {"a", ends[0].value}, {"b", ends[1].value}, {"measure", v}};
            emit(j);
            return;
        }
        out_ << real(v) << "\n";
    }

    void freq() {
        const auto base = make_base();
        const double closed = frequency(base, o_.digit);
        std::optional<double> empirical;
        std::uint64_t seed = 0;
        std::optional<double> x0;
        if (o_.x0) x0 = parse_real(*o_.x0);
        if (o_.empirical) {
            seed = resolve_seed(o_);
            empirical = oracle::birkhoff_frequency(base, x0, o_.digit, *o_.empirical, seed);
        }
        if (o_.json) {
            auto j = envelope("freq", base);
            j["payload"] = {{"digit", o_.digit}, {"frequency", closed}};
            if (empirical) {
                j["payload"]["empirical"] = {{"frequency", *empirical}, {"iterations", *o_.empirical}, {"seed", seed},
                                             {"rng", oracle::kRngAlgorithm}};
            }
            emit(j);
            return;
        }
        out_ << "frequency=" << real(closed) << "\n";
        if (empirical) out_ << "empirical=" << real(*empirical) << " (N=" << *o_.empirical << ", seed=" << seed << ")\n";
    }

    void entropy_cmd() {
        const auto base = make_base();
        const double h = entropy(base);
        if (o_.json) {
            auto j = envelope("entropy", base);
            j["payload"] = {{"entropy", h}};
            emit(j);
            return;
        }
        out_ << real(h) << "\n";
    }

    void compare() {
        const auto base = make_base();
        const auto report = o_.lazy ? compare_lazy_transforms(base) : compare_transforms(base);
        if (o_.json) {
            auto j = envelope("compare", base);
            Json rows = Json::array();
            for (const auto& d : report.intervals) {
                rows.push_back({{"lo", d.interval.lo},
                                {"hi", d.interval.hi},
                                {"witness", d.witness},
                                {"delta_image", d.delta_image},
                                {"base_image", d.base_image}});
            }
            j["payload"] = {{"side", o_.lazy ? "lazy" : "greedy"},
                            {"closed", report.left_open ? "right" : "left"},
                            {"coincide", report.empty()},
                            {"intervals", rows}};
            emit(j);
            return;
        }
        if (report.empty()) {
            out_ << "coincide\n";
            return;
        }
        for (const auto& d : report.intervals) {
            out_ << (report.left_open ? "(" : "[") << real(d.interval.lo) << ", " << real(d.interval.hi)
                 << (report.left_open ? "]" : ")") << " witness=" << real(d.witness)
                 << " delta_image=" << real(d.delta_image) << " base_image=" << real(d.base_image) << "\n";
        }
    }

    void orbit() {
        const auto base = make_base();
        if (o_.mode != "greedy" && o_.mode != "lazy") throw ParseError("--mode must be greedy or lazy", 0);
        const bool lazy = o_.mode == "lazy";
        StatePoint s{0, parse_real(o_.x)};
        if (lazy ? !(s.value > 0.0 && s.value <= base.xmax(0)) : !(s.value >= 0.0 && s.value < base.xmax(0))) {
            throw DomainError("start point outside the " + o_.mode + " domain of slot 0");
        }
        std::string csv = "step,slot,x,digit\n";
        Json rows = Json::array();
        for (std::size_t k = 0; k < o_.steps; ++k) {
            const auto r = lazy ? lazy_step(base, s) : greedy_step(base, s);
            csv += fmt::format("{},{},{:.17g},{}\n", k, s.slot, s.value, r.digit);
            rows.push_back({{"step", k}, {"slot", s.slot}, {"x", s.value}, {"digit", r.digit}});
            s = r.state;
        }
        if (!o_.csv.empty()) write_file(o_.csv, csv);
        if (o_.json) {
            auto j = envelope("orbit", base);
            j["payload"] = {{"mode", o_.mode}, {"trajectory", rows}};
            emit(j);
            return;
        }
        if (o_.csv.empty()) out_ << csv;
    }

    void graph() {
        const auto base = make_base();
        std::vector<std::size_t> slots;
        if (o_.graph_slot) {
            check_slot(base, *o_.graph_slot);
            slots.push_back(*o_.graph_slot);
        } else {
            for (std::size_t i = 0; i < base.size(); ++i) slots.push_back(i);
        }
        const double per_unit = o_.samples ? static_cast<double>(*o_.samples) : kSamplesPerUnit;
        std::vector<std::string> modes;
        if (o_.mode == "both") modes = {"greedy", "lazy"};
        else if (o_.mode == "greedy" || o_.mode == "lazy") modes = {o_.mode};
        else throw ParseError("--mode must be greedy, lazy or both", 0);
        if (modes.size() > 1 && o_.csv.empty()) throw ParseError("--mode both needs --csv", 0);

        Json files = Json::array();
        for (const auto& m : modes) {
            const std::string csv = graph_csv(base, slots, m == "lazy", per_unit);
            if (o_.csv.empty()) {
                out_ << csv;
                continue;
            }
            const std::string path = modes.size() > 1 ? suffixed(o_.csv, "_" + m) : o_.csv;
            write_file(path, csv);
            files.push_back({{"mode", m}, {"path", path}});
            if (!o_.json) out_ << "wrote " << path << "\n";
        }
        if (o_.json && !o_.csv.empty()) {
            auto j = envelope("graph", base);
            j["payload"] = {{"slots", slots}, {"files", files}};
            emit(j);
        }
    }

private:
    AlternateBase make_base() const { return AlternateBase(parse_base(o_.base)); }

    static void check_slot(const AlternateBase& base, std::size_t slot) {
        if (slot >= base.size()) throw DomainError("--slot outside [0, p-1]");
    }

    void emit(const Json& j) { out_ << j.dump(2) << "\n"; }

    const Options& o_;
    std::ostream& out_;
};

}  // namespace detail

// Runs one command line (without the program name). Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    detail::Options o;
    CLI::App app{"Greedy and lazy expansions in alternate bases", "altbase"};
    app.require_subcommand(1);

    auto with_base = [&](CLI::App* sub) {
        sub->add_option("--base", o.base, "comma-separated base expressions, e.g. \"(1+sqrt(13))/2,(5+sqrt(13))/6\"")
            ->required();
        sub->add_flag("--json", o.json, "emit JSON");
        return sub;
    };

    auto* expand = with_base(app.add_subcommand("expand", "greedy or lazy digits of x"));
    expand->add_option("--x", o.x, "point to expand")->required();
    expand->add_option("--mode", o.mode, "greedy or lazy");
    expand->add_option("--digits", o.digits, "number of digits");

    auto* density = with_base(app.add_subcommand("density", "invariant density of one slot"));
    density->add_option("--slot", o.slot);
    density->add_option("--truncation", o.truncation, "series depth M");
    density->add_option("--samples", o.samples, "CSV samples per unit length");
    density->add_option("--csv", o.csv, "write x,density rows");

    auto* measure = with_base(app.add_subcommand("measure", "invariant measure of [a,b) in one slot"));
    measure->add_option("--slot", o.slot);
    measure->add_option("--interval", o.interval, "a,b")->required();

    auto* freq = with_base(app.add_subcommand("freq", "digit frequency"));
    freq->add_option("--digit", o.digit)->required();
    freq->add_option("--empirical", o.empirical, "also run N greedy steps");
    freq->add_option("--x0", o.x0, "start of the empirical orbit (default: random)");
    freq->add_option("--seed", o.seed, "RNG seed (default: $ALTBASE_SEED or 0)");

    auto* ent = with_base(app.add_subcommand("entropy", "entropy (1/p) log B"));

    auto* compare = with_base(app.add_subcommand("compare", "where the (B, Delta) map and the p-fold map differ"));
    compare->add_flag("--lazy", o.lazy, "compare the lazy transformations");

    auto* orbit = with_base(app.add_subcommand("orbit", "trajectory as step,slot,x,digit"));
    orbit->add_option("--x", o.x)->required();
    orbit->add_option("--mode", o.mode, "greedy or lazy");
    orbit->add_option("--steps", o.steps);
    orbit->add_option("--csv", o.csv);

    auto* graph = with_base(app.add_subcommand("graph", "sampled graphs of the single-step maps"));
    graph->add_option("--slot", o.graph_slot, "one slot (default: all)");
    graph->add_option("--mode", o.mode, "greedy, lazy or both")->default_str("both");
    graph->add_option("--samples", o.samples, "samples per unit length");
    graph->add_option("--csv", o.csv, "output path; both modes get _greedy/_lazy suffixes");

    std::vector<std::string> argv_store{"altbase"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }
    if (graph->parsed() && graph->count("--mode") == 0) o.mode = "both";

    detail::Runner r(o, out);
    try {
        if (expand->parsed()) r.expand();
        else if (density->parsed()) r.density();
        else if (measure->parsed()) r.measure();
        else if (freq->parsed()) r.freq();
        else if (ent->parsed()) r.entropy_cmd();
        else if (compare->parsed()) r.compare();
        else if (orbit->parsed()) r.orbit();
        else if (graph->parsed()) r.graph();
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const SearchTooLarge& e) {
        err << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const SingularSystem& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const TruncationTooShallow& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const NotAllowable& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const AlphabetError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const OutputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace altbase::cli
