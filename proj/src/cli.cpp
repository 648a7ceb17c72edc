#include "gaugecalc/cli.hpp"

#include "gaugecalc/curves.hpp"
#include "gaugecalc/random_fields.hpp"
#include "gaugecalc/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#ifndef GAUGECALC_VERSION
#define GAUGECALC_VERSION "0.0.0"
#endif

namespace gaugecalc::cli {

namespace {

constexpr double pi = std::numbers::pi;
using nlohmann::json;

const std::map<std::string, Command> kCommands = {
    {"verify", Command::verify}, {"torus-curve", Command::torus_curve}, {"residual", Command::residual},
    {"holonomy", Command::holonomy}, {"ab", Command::ab}, {"wong", Command::wong}, {"spectrum", Command::spectrum}};

const std::map<std::string, OutputFormat> kFormats = {{"report-text", OutputFormat::report_text},
                                                      {"structured-record", OutputFormat::structured_record},
                                                      {"csv", OutputFormat::csv}};

// Everything a command produces; rendered in one of the three formats.
struct Report {
    json body = json::object();
    std::map<std::string, double> tolerances;
    std::vector<CheckResult> checks;
    std::vector<std::string> lines;
    std::vector<std::string> csv_header;
    std::vector<std::vector<double>> csv_rows;

    void check(std::string name, double value, double tol) { checks.push_back({"", std::move(name), value, 0.0, tol}); }
    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass(); });
    }
};

std::string num(double v) { return fmt::format("{:.6e}", v); }
std::string num(cplx z) { return fmt::format("{:.12f}{:+.12f}i", z.real(), z.imag()); }

std::string check_name(const CheckResult& c) { return c.suite.empty() ? c.name : c.suite + "/" + c.name; }

std::string bound_text(const CheckResult& c) {
    if (std::isinf(c.hi)) return ">= " + num(c.lo);
    if (c.lo == 0.0) return "<= " + num(c.hi);
    return "in [" + num(c.lo) + ", " + num(c.hi) + "]";
}

json bound_json(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

std::string matrix_text(const Mat& m) {
    std::string s;
    for (int i = 0; i < m.rows(); ++i) {
        s += i ? "; " : "[";
        for (int j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + num(m(i, j));
    }
    return s + "]";
}

std::vector<double> split_numbers(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidInput(what + ": '" + item + "' is not a number");
        }
    }
    return out;
}

int as_int(double v, const std::string& what) {
    if (v != std::round(v)) throw InvalidInput(what + ": expected an integer, got " + fmt::format("{}", v));
    return static_cast<int>(v);
}

Mat su2_element(const std::array<double, 3>& c) {
    return Mat(c[0] * pauli::e(1).matrix() + c[1] * pauli::e(2).matrix() + c[2] * pauli::e(3).matrix());
}

void require_rank2(const std::string& field, int rank) {
    if (rank != 2) throw InvalidInput("field: '" + field + "' is su(2)-valued and needs --rank 2");
}

Report run_verify(const RunConfig& cfg) {
    Report r;
    r.checks = run_verify_suite({cfg.grid, cfg.seed, cfg.steps.value_or(1000)});
    for (const auto& c : r.checks) r.tolerances[check_name(c)] = std::isinf(c.hi) ? c.lo : c.hi;
    r.csv_header = {"index", "value", "lo", "hi", "pass"};
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        const auto& c = r.checks[i];
        r.csv_rows.push_back({static_cast<double>(i), c.value, c.lo, c.hi, c.pass() ? 1.0 : 0.0});
    }
    return r;
}

Report run_torus_curve(const RunConfig& cfg) {
    Report r;
    TorusFamily family;
    if (cfg.family == "seamed") family = TorusFamily::seamed;
    else if (cfg.family == "smooth") family = TorusFamily::smooth;
    else throw InvalidInput("family: expected 'seamed' or 'smooth', got '" + cfg.family + "'");

    std::vector<double> ts;
    for (int i = 0; i < cfg.samples; ++i) ts.push_back(cfg.samples == 1 ? 0.0 : static_cast<double>(i) / (cfg.samples - 1));
    const ClaimReport rep = torus_family_report(family, cfg.lambda, ts, cfg.grid, cfg.steps.value_or(1000));

    const double agree_tol = cfg.tol.value_or(1e-8);
    r.tolerances = {{"t0_flat", 1e-10}, {"two_path_agreement", agree_tol}, {"flat_threshold", kFlatnessTol}};

    double family_gap = 0.0;
    for (const auto& rec : rep.records) family_gap = std::max(family_gap, rec.su2.general_discrepancy);
    Rng rng(cfg.seed);
    TorusGrid grid(cfg.grid);
    double random_gap = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        LieForm alpha = random_scalar_form(rng, 1, grid);
        LieForm beta = wedge_compose(random_scalar_form(rng, 0, grid), alpha);
        LieForm gamma = wedge_compose(random_scalar_form(rng, 0, grid), alpha);
        random_gap = std::max(random_gap, su2_ym_conditions(su2_potential(alpha, beta, gamma).connection).general_discrepancy);
    }
    r.check("t=0 is flat", rep.records.front().curvature_l2, 1e-10);
    r.check("residual paths agree along the family", family_gap, agree_tol);
    r.check("residual paths agree on 20 random ansatz fields", random_gap, agree_tol);

    r.body = to_json(rep);
    r.body["random_ansatz_discrepancy"] = random_gap;

    r.lines.push_back(fmt::format("family: {}  lambda: {}  grid: {}  seam jump: {}", to_string(family), num(cfg.lambda),
                                  cfg.grid, num(rep.seam_jump)));
    r.lines.push_back("t  curvature_l2  residual_l2  flat  seam_fraction  su2_residual(derived)  su2_residual(literal)");
    for (const auto& rec : rep.records) {
        const auto& s = rec.su2;
        r.lines.push_back(fmt::format("{:.4f}  {}  {}  {}  {}  ({}, {}, {})  ({}, {}, {})", rec.t, num(rec.curvature_l2),
                                      num(rec.residual_l2), rec.flat ? "yes" : "no", num(rec.seam_fraction),
                                      num(s.residual[0]), num(s.residual[1]), num(s.residual[2]),
                                      num(s.literal_residual[0]), num(s.literal_residual[1]), num(s.literal_residual[2])));
        r.csv_rows.push_back({rec.t, rec.curvature_l2, rec.residual_l2, rec.flat ? 1.0 : 0.0});
    }
    const auto& last = rep.records.back();
    r.lines.push_back(fmt::format("t={} flat: {} (reported, not asserted)", last.t, last.flat ? "yes" : "no"));
    r.lines.push_back(fmt::format("h1 at t={}: mean {}  min {}  max {}", last.t, num(last.su2.h_mean[0]),
                                  num(last.su2.h_min[0]), num(last.su2.h_max[0])));
    for (const auto& h : rep.holonomies)
        r.lines.push_back(fmt::format("holonomy t={} around {}: trace {}  {}", h.t, h.axis == 0 ? "x" : "y",
                                      num(cplx(h.matrix.trace())), matrix_text(h.matrix)));
    r.lines.push_back(fmt::format("jets: |nabla E1| {}  |delta C_E| {}  |nabla C_E| {}  harmonic(E1) {}",
                                  num(rep.jets.nabla_e1), num(rep.jets.delta_c_e), num(rep.jets.nabla_c_e),
                                  num(rep.jets.harmonic_projection_e1)));
    r.csv_header = {"t", "curvature_l2", "residual_l2", "flat"};
    return r;
}

Report run_residual(const RunConfig& cfg) {
    Report r;
    const double flat_tol = cfg.tol.value_or(kFlatnessTol);
    r.tolerances = {{"flat_threshold", flat_tol}};
    TorusGrid grid(cfg.grid);
    const Connection c = field_connection(cfg.field, grid, cfg.rank, cfg.lambda, cfg.seed);
    const FieldReport fr = field_report(c, flat_tol);
    r.body = {{"field", cfg.field}, {"report", to_json(fr)}};
    r.lines.push_back("field: " + cfg.field);
    r.lines.push_back("ym_value: " + num(fr.ym_value));
    r.lines.push_back("curvature_l2: " + num(fr.curvature_l2));
    r.lines.push_back("residual_l2: " + num(fr.residual_l2));
    r.lines.push_back("covariant_residual_l2: " + num(fr.covariant_residual_l2));
    r.lines.push_back(std::string("flat: ") + (fr.flat ? "yes" : "no"));
    if (c.rank() == 2) {
        const Su2Conditions s = su2_ym_conditions(c);
        r.body["su2"] = to_json(s);
        r.lines.push_back(fmt::format("su2 residuals: ({}, {}, {})  wedge-free: {}  ansatz vs general residual: {}",
                                      num(s.residual[0]), num(s.residual[1]), num(s.residual[2]),
                                      s.wedge_free ? "yes" : "no", num(s.general_discrepancy)));
    }
    r.csv_header = {"ym_value", "residual_l2", "covariant_residual_l2", "curvature_l2", "flat"};
    r.csv_rows.push_back({fr.ym_value, fr.residual_l2, fr.covariant_residual_l2, fr.curvature_l2, fr.flat ? 1.0 : 0.0});
    return r;
}

Report run_holonomy(const RunConfig& cfg) {
    Report r;
    const double tol = cfg.tol.value_or(1e-8);
    r.tolerances = {{"unitarity", tol}};
    const TorusPotential pot = field_potential(cfg.field, cfg.grid, cfg.rank, cfg.lambda, cfg.seed);
    const ParametricPath path = parse_loop(cfg.loop);
    const Mat g = parallel_transport(pot, path, cfg.steps.value_or(1000));
    r.check("transport is unitary", unitarity_defect(g), tol);
    r.body = {{"field", cfg.field}, {"loop", cfg.loop}, {"closed", path.closed}, {"matrix", matrix_to_json(g)},
              {"trace", {g.trace().real(), g.trace().imag()}}};
    r.lines.push_back("field: " + cfg.field + "  loop: " + cfg.loop + (path.closed ? " (closed)" : " (open)"));
    r.lines.push_back("transport: " + matrix_text(g));
    r.lines.push_back("trace: " + num(cplx(g.trace())));
    r.csv_header = {"row", "col", "re", "im"};
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) r.csv_rows.push_back({double(i), double(j), g(i, j).real(), g(i, j).imag()});
    return r;
}

Report run_ab(const RunConfig& cfg) {
    Report r;
    const double tol = cfg.tol.value_or(1e-8);
    r.tolerances = {{"monodromy", tol}};
    const AharonovBohmRecord rec = aharonov_bohm_monodromy(cfg.k, cfg.winding, cfg.steps.value_or(0));
    r.check("monodromy matches e^{2 pi i k n}", rec.error, tol);
    r.body = to_json(rec);
    r.lines.push_back(fmt::format("k: {}  winding: {}  steps: {}", num(cfg.k), rec.winding, rec.steps));
    r.lines.push_back("monodromy: " + num(rec.monodromy));
    r.lines.push_back("expected: " + num(rec.expected));
    r.lines.push_back("flux (k = -Phi/2pi): " + num(rec.flux.real()));
    r.csv_header = {"k", "winding", "steps", "re", "im", "error"};
    r.csv_rows.push_back({cfg.k, double(rec.winding), double(rec.steps), rec.monodromy.real(), rec.monodromy.imag(), rec.error});
    return r;
}

Report run_wong(const RunConfig& cfg) {
    Report r;
    const double tol = cfg.tol.value_or(1e-9);
    r.tolerances = {{"norm_conservation", tol}, {"ad_consistency", 1e-7}};
    require_rank2("wong", cfg.rank);
    const TorusPotential pot = field_potential(cfg.field, cfg.grid, cfg.rank, cfg.lambda, cfg.seed);
    const ParametricPath path = parse_loop(cfg.loop);
    const int steps = cfg.steps.value_or(1000);
    const WongTrajectory w = wong_evolve(pot, path, su2_element(cfg.spin), steps);
    r.check("<I,I> conserved", w.max_norm_drift, tol);
    r.check("I(t) = Ad_g(t) I0", w.max_ad_mismatch, 1e-7);
    r.csv_header = {"t", "i1", "i2", "i3"};
    auto rows = json::array();
    const int n = std::max(cfg.samples, 2);
    for (int s = 0; s < n; ++s) {
        const int i = static_cast<int>(std::lround(static_cast<double>(s) * steps / (n - 1)));
        const auto c = pauli::coordinates(w.spin[i]);
        r.csv_rows.push_back({w.t[i], c[0], c[1], c[2]});
        rows.push_back({w.t[i], c[0], c[1], c[2]});
        r.lines.push_back(fmt::format("t={:.4f}  I = ({}, {}, {})", w.t[i], num(c[0]), num(c[1]), num(c[2])));
    }
    r.body = {{"field", cfg.field}, {"loop", cfg.loop}, {"trajectory", rows}, {"max_norm_drift", w.max_norm_drift},
              {"max_ad_mismatch", w.max_ad_mismatch}};
    return r;
}

Report run_spectrum(const RunConfig& cfg) {
    Report r;
    const double threshold = cfg.tol.value_or(kKernelThreshold);
    r.tolerances = {{"kernel_threshold", threshold}};
    TorusGrid grid(cfg.grid);
    const long long size = 2LL * cfg.grid * cfg.grid * cfg.rank * cfg.rank;
    if (size > 4096)
        throw InvalidInput(fmt::format("spectrum: dense eigenproblem of size {} exceeds 4096; lower --grid or --rank", size));
    const Connection c = field_connection(cfg.field, grid, cfg.rank, cfg.lambda, cfg.seed);
    if (l2_norm(curvature(c)) > kFlatnessTol)
        throw InvalidInput("field: '" + cfg.field + "' is not flat; the Laplacian kernel is only defined for flat connections");
    r.csv_header = {"degree", "index", "eigenvalue"};
    auto dims = json::array();
    auto spectra = json::array();
    for (int k = 0; k <= 2; ++k) {
        const auto eig = laplacian_spectrum(c, k);
        const int dim = static_cast<int>(std::count_if(eig.begin(), eig.end(), [&](double v) { return v < threshold; }));
        dims.push_back(dim);
        auto low = json::array();
        std::string text;
        for (int i = 0; i < std::min<int>(cfg.samples, static_cast<int>(eig.size())); ++i) {
            low.push_back(eig[i]);
            r.csv_rows.push_back({double(k), double(i), eig[i]});
            text += (i ? ", " : "") + num(eig[i]);
        }
        spectra.push_back(low);
        r.lines.push_back(fmt::format("degree {}: kernel dim {}  lowest eigenvalues: {}", k, dim, text));
    }
    r.body = {{"field", cfg.field}, {"rank", cfg.rank}, {"kernel_dims", dims}, {"lowest_eigenvalues", spectra}};
    return r;
}

void render(const RunConfig& cfg, const Report& r, std::ostream& os) {
    const bool ok = r.pass();
    if (cfg.format == OutputFormat::csv) {
        os << fmt::format("{}\n", fmt::join(r.csv_header, ","));
        for (const auto& row : r.csv_rows) {
            std::vector<std::string> cells;
            for (double v : row) cells.push_back(fmt::format("{:.17g}", v));
            os << fmt::format("{}\n", fmt::join(cells, ","));
        }
        return;
    }
    if (cfg.format == OutputFormat::structured_record) {
        json checks = json::array();
        for (const auto& c : r.checks)
            checks.push_back({{"name", check_name(c)}, {"value", c.value}, {"lo", c.lo}, {"hi", bound_json(c.hi)},
                              {"pass", c.pass()}});
        json doc = {{"version", GAUGECALC_VERSION}, {"command", to_string(cfg.command)}, {"config", config_echo(cfg)},
                    {"seed", cfg.seed}, {"tolerances", r.tolerances}, {"result", r.body}, {"checks", checks},
                    {"status", ok ? "pass" : "fail"}};
        os << doc.dump(2) << "\n";
        return;
    }
    os << "gaugecalc report\n";
    os << "version: " << GAUGECALC_VERSION << "\n";
    os << "command: " << to_string(cfg.command) << "\n";
    os << "config: " << config_echo(cfg).dump() << "\n";
    os << "seed: " << cfg.seed << "\n";
    os << "tolerances:\n";
    for (const auto& [name, v] : r.tolerances) os << "  " << name << ": " << num(v) << "\n";
    if (!r.lines.empty()) os << "results:\n";
    for (const auto& line : r.lines) os << "  " << line << "\n";
    if (!r.checks.empty()) os << "checks:\n";
    for (const auto& c : r.checks)
        os << fmt::format("  [{}] {}: {} ({})\n", c.pass() ? "PASS" : "FAIL", check_name(c), num(c.value), bound_text(c));
    os << "status: " << (ok ? "PASS" : "FAIL") << "\n";
}

}  // namespace

std::string to_string(Command c) {
    for (const auto& [name, value] : kCommands)
        if (value == c) return name;
    return "?";
}

std::string to_string(OutputFormat f) {
    for (const auto& [name, value] : kFormats)
        if (value == f) return name;
    return "?";
}

Command parse_command(const std::string& s) {
    auto it = kCommands.find(s);
    if (it == kCommands.end()) throw InvalidInput("command: unknown command '" + s + "'");
    return it->second;
}

OutputFormat parse_format(const std::string& s) {
    auto it = kFormats.find(s);
    if (it == kFormats.end())
        throw InvalidInput("format: expected report-text, structured-record or csv, got '" + s + "'");
    return it->second;
}

void apply_config(const json& doc, RunConfig& cfg) {
    if (!doc.is_object()) throw InvalidInput("config: top level must be an object");
    auto need = [](const json& v, bool ok, const std::string& key, const char* type) {
        if (!ok) throw InvalidInput("config: field '" + key + "' must be " + type + ", got " + v.dump());
    };
    for (const auto& [key, v] : doc.items()) {
        if (key == "command") need(v, v.is_string(), key, "a string"), cfg.command = parse_command(v.get<std::string>());
        else if (key == "grid") need(v, v.is_number_integer(), key, "an integer"), cfg.grid = v.get<int>();
        else if (key == "steps") need(v, v.is_number_integer(), key, "an integer"), cfg.steps = v.get<int>();
        else if (key == "tol") need(v, v.is_number(), key, "a number"), cfg.tol = v.get<double>();
        else if (key == "seed") need(v, v.is_number_unsigned(), key, "a non-negative integer"), cfg.seed = v.get<std::uint64_t>();
        else if (key == "out") need(v, v.is_string(), key, "a string"), cfg.out = v.get<std::string>();
        else if (key == "format") need(v, v.is_string(), key, "a string"), cfg.format = parse_format(v.get<std::string>());
        else if (key == "k") need(v, v.is_number(), key, "a number"), cfg.k = v.get<double>();
        else if (key == "winding") need(v, v.is_number_integer(), key, "an integer"), cfg.winding = v.get<int>();
        else if (key == "lambda") need(v, v.is_number(), key, "a number"), cfg.lambda = v.get<double>();
        else if (key == "samples") need(v, v.is_number_integer(), key, "an integer"), cfg.samples = v.get<int>();
        else if (key == "loop") need(v, v.is_string(), key, "a string"), cfg.loop = v.get<std::string>();
        else if (key == "field") need(v, v.is_string(), key, "a string"), cfg.field = v.get<std::string>();
        else if (key == "family") need(v, v.is_string(), key, "a string"), cfg.family = v.get<std::string>();
        else if (key == "rank") need(v, v.is_number_integer(), key, "an integer"), cfg.rank = v.get<int>();
        else if (key == "spin") {
            need(v, v.is_array() && v.size() == 3 && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); }),
                 key, "an array of 3 numbers");
            for (int a = 0; a < 3; ++a) cfg.spin[a] = v[a].get<double>();
        } else
            throw InvalidInput("config: unknown key '" + key + "'");
    }
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot read '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput("config: " + path + ": " + e.what());
    }
    apply_config(doc, cfg);
}

void validate(const RunConfig& cfg) {
    if (cfg.grid < 8) throw InvalidInput("grid: must be at least 8, got " + std::to_string(cfg.grid));
    if (cfg.steps && *cfg.steps < kMinSteps) throw InvalidInput("steps: must be at least 100, got " + std::to_string(*cfg.steps));
    if (cfg.tol && !(*cfg.tol > 0.0 && std::isfinite(*cfg.tol))) throw InvalidInput("tol: must be a positive number");
    if (cfg.samples < 1) throw InvalidInput("samples: must be positive, got " + std::to_string(cfg.samples));
    if (cfg.rank < 1 || cfg.rank > kMaxRank) throw InvalidInput("rank: must be in 1..4, got " + std::to_string(cfg.rank));
    if (!std::isfinite(cfg.k)) throw InvalidInput("k: must be finite");
    if (!std::isfinite(cfg.lambda)) throw InvalidInput("lambda: must be finite");
    for (double s : cfg.spin)
        if (!std::isfinite(s)) throw InvalidInput("spin: must be finite");
}

json config_echo(const RunConfig& cfg) {
    return {{"command", to_string(cfg.command)},
            {"grid", cfg.grid},
            {"steps", cfg.steps ? json(*cfg.steps) : json(nullptr)},
            {"tol", cfg.tol ? json(*cfg.tol) : json(nullptr)},
            {"seed", cfg.seed},
            {"out", cfg.out},
            {"format", to_string(cfg.format)},
            {"k", cfg.k},
            {"winding", cfg.winding},
            {"lambda", cfg.lambda},
            {"samples", cfg.samples},
            {"loop", cfg.loop},
            {"field", cfg.field},
            {"family", cfg.family},
            {"rank", cfg.rank},
            {"spin", cfg.spin}};
}

std::optional<int> parse_arguments(int argc, const char* const* argv, RunConfig& cfg, std::ostream& out,
                                   std::ostream& err) {
    CLI::App app{"gaugecalc: discrete gauge fields on the torus, holonomy and monodromy"};
    app.set_version_flag("--version", GAUGECALC_VERSION);
    std::string command, config, format;
    RunConfig f;
    int steps = 0;
    double tol = 0.0;
    std::string spin;

    app.add_option("command", command, "verify | torus-curve | residual | holonomy | ab | wong | spectrum");
    auto* o_config = app.add_option("--config", config, "JSON file with the same keys as the flags");
    auto* o_grid = app.add_option("--grid", f.grid, "grid nodes per direction");
    auto* o_steps = app.add_option("--steps", steps, "transport steps (>= 100)");
    auto* o_tol = app.add_option("--tol", tol, "tolerance of the command's main check");
    auto* o_seed = app.add_option("--seed", f.seed, "seed for randomized fields");
    auto* o_out = app.add_option("--out", f.out, "write the report to this path");
    auto* o_format = app.add_option("--format", format, "report-text | structured-record | csv");
    auto* o_k = app.add_option("--k", f.k, "Aharonov-Bohm residue k");
    auto* o_winding = app.add_option("--winding", f.winding, "winding number");
    auto* o_lambda = app.add_option("--lambda", f.lambda, "lambda parameter of fields and the torus family");
    auto* o_samples = app.add_option("--samples", f.samples, "number of sample times / rows");
    auto* o_loop = app.add_option("--loop", f.loop, "x:n | y:n | torus:wx,wy[,bx,by] | circle:cx,cy,r[,n] | segment:x0,y0,x1,y1");
    auto* o_field = app.add_option("--field", f.field, "zero | pi-dx | pi-dx-lambda | sin-dy | random");
    auto* o_family = app.add_option("--family", f.family, "seamed | smooth");
    auto* o_rank = app.add_option("--rank", f.rank, "matrix size m");
    auto* o_spin = app.add_option("--spin", spin, "initial Wong spin as su(2) coordinates a,b,c");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (o_config->count()) apply_config_file(config, cfg);
        if (!command.empty()) cfg.command = parse_command(command);
        else if (!o_config->count()) throw InvalidInput("command: missing (one of verify, torus-curve, residual, holonomy, ab, wong, spectrum)");
        if (o_grid->count()) cfg.grid = f.grid;
        if (o_steps->count()) cfg.steps = steps;
        if (o_tol->count()) cfg.tol = tol;
        if (o_seed->count()) cfg.seed = f.seed;
        if (o_out->count()) cfg.out = f.out;
        if (o_format->count()) cfg.format = parse_format(format);
        if (o_k->count()) cfg.k = f.k;
        if (o_winding->count()) cfg.winding = f.winding;
        if (o_lambda->count()) cfg.lambda = f.lambda;
        if (o_samples->count()) cfg.samples = f.samples;
        if (o_loop->count()) cfg.loop = f.loop;
        if (o_field->count()) cfg.field = f.field;
        if (o_family->count()) cfg.family = f.family;
        if (o_rank->count()) cfg.rank = f.rank;
        if (o_spin->count()) {
            auto v = split_numbers(spin, "spin");
            if (v.size() != 3) throw InvalidInput("spin: expected three comma-separated numbers");
            std::copy(v.begin(), v.end(), cfg.spin.begin());
        }
        validate(cfg);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return std::nullopt;
}

Connection field_connection(const std::string& name, const TorusGrid& grid, int rank, double lambda, std::uint64_t seed) {
    if (name == "zero") return Connection::trivial(grid, rank);
    if (name == "random") {
        require_rank2(name, rank);
        // su(2)-valued so the ansatz diagnostics apply
        Rng rng(seed);
        LieForm a = random_scalar_form(rng, 1, grid), b = random_scalar_form(rng, 1, grid),
                c = random_scalar_form(rng, 1, grid);
        return su2_potential(a, b, c).connection;
    }
    const TorusPotential p = field_potential(name, grid.n(), rank, lambda, seed);
    return Connection(LieForm::sample(1, grid, rank, ValueClass::antihermitian,
                                      {[&p](double x, double y) { return p.p(x, y); },
                                       [&p](double x, double y) { return p.q(x, y); }}));
}

TorusPotential field_potential(const std::string& name, int grid, int rank, double lambda, std::uint64_t seed) {
    const Mat z2 = zero_matrix(2);
    const Mat e1 = pauli::e(1).matrix(), e2 = pauli::e(2).matrix();
    if (name == "zero") return TorusPotential::zero(rank);
    require_rank2(name, rank);
    if (name == "pi-dx") return TorusPotential(2, [e1](double, double) { return Mat(pi * e1); }, [z2](double, double) { return z2; });
    if (name == "pi-dx-lambda")
        return TorusPotential(2, [=](double, double) { return Mat(pi * (e1 + lambda * e2)); }, [z2](double, double) { return z2; });
    if (name == "sin-dy")
        return TorusPotential(2, [z2](double, double) { return z2; },
                              [e1](double x, double) { return Mat(std::sin(2 * pi * x) * e1); });
    if (name == "random") return TorusPotential::from_connection(field_connection(name, TorusGrid(grid), rank, lambda, seed));
    throw InvalidInput("field: unknown field '" + name + "' (zero, pi-dx, pi-dx-lambda, sin-dy, random)");
}

ParametricPath parse_loop(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::vector<double> p = colon == std::string::npos ? std::vector<double>{} : split_numbers(text.substr(colon + 1), "loop");
    auto arity = [&](std::size_t lo, std::size_t hi) {
        if (p.size() < lo || p.size() > hi)
            throw InvalidInput(fmt::format("loop: '{}' takes {} to {} parameters, got {}", kind, lo, hi, p.size()));
    };
    if (kind == "x" || kind == "y") {
        arity(0, 1);
        return torus_generator(kind == "x" ? 0 : 1, p.empty() ? 1 : as_int(p[0], "loop"));
    }
    if (kind == "torus") {
        arity(2, 4);
        const cplx base = p.size() == 4 ? cplx(p[2], p[3]) : cplx(0.0);
        return torus_loop(as_int(p[0], "loop"), as_int(p[1], "loop"), base);
    }
    if (kind == "circle") {
        arity(3, 4);
        if (!(p[2] > 0.0)) throw InvalidInput("loop: circle radius must be positive");
        return circle(cplx(p[0], p[1]), p[2], p.size() == 4 ? as_int(p[3], "loop") : 1, PathDomain::torus);
    }
    if (kind == "segment") {
        arity(4, 4);
        return segment(cplx(p[0], p[1]), cplx(p[2], p[3]), PathDomain::torus);
    }
    throw InvalidInput("loop: unknown loop family '" + kind + "' (x, y, torus, circle, segment)");
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Report r;
    try {
        validate(cfg);
        switch (cfg.command) {
            case Command::verify: r = run_verify(cfg); break;
            case Command::torus_curve: r = run_torus_curve(cfg); break;
            case Command::residual: r = run_residual(cfg); break;
            case Command::holonomy: r = run_holonomy(cfg); break;
            case Command::ab: r = run_ab(cfg); break;
            case Command::wong: r = run_wong(cfg); break;
            case Command::spectrum: r = run_spectrum(cfg); break;
        }
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    if (cfg.out.empty()) {
        render(cfg, r, out);
    } else {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) {
            err << "error: out: cannot write '" << cfg.out << "'\n";
            return kExitInvalid;
        }
        render(cfg, r, file);
    }
    if (!r.pass()) {
        for (const auto& c : r.checks)
            if (!c.pass()) err << "failed: " << check_name(c) << " = " << num(c.value) << " (" << bound_text(c) << ")\n";
        return kExitFailed;
    }
    return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    if (auto stop = parse_arguments(argc, argv, cfg, out, err)) return *stop;
    return run(cfg, out, err);
}

}  // namespace gaugecalc::cli
