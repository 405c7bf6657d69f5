#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "seglab/energy.hpp"
#include "seglab/exact.hpp"
#include "seglab/frequency.hpp"
#include "seglab/geometry.hpp"
#include "seglab/nodal.hpp"
#include "seglab/solver.hpp"
#include "seglab/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace seglab;

namespace {

constexpr const char* kToolVersion = "seglab 0.1.0";

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// outputs directory plus the manifest, before any long computation
void start_run(const fs::path& out, const std::string& command,
               const std::string& configPath) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw std::runtime_error("cannot create output dir " + out.string());
    json m = {{"command", command},
              {"configPath", configPath},
              {"outputDir", out.string()},
              {"timestamp", iso_now()},
              {"toolVersion", kToolVersion}};
    write_text(out / "manifest.json", m.dump(2) + "\n");
}

void validate_trace(const Trace& tr) {
    auto probe = [&](double th) {
        auto v = tr.eval(th);
        for (double x : v)
            if (!std::isfinite(x) || x < 0)
                throw std::invalid_argument("trace values must be finite and nonnegative");
        double scale = std::max({v[0], v[1], v[2], 1.0});
        if (v[0] * v[1] * v[2] > 1e-12 * scale * scale * scale)
            throw std::invalid_argument(
                "trace violates the zero-product condition psi1*psi2*psi3 = 0");
    };
    if (tr.kind == Trace::Kind::Table) {
        for (double th : tr.theta) probe(th);
    } else {
        for (int k = 0; k < 720; ++k) probe(k * 2.0 * 3.14159265358979323846 / 720);
    }
}

// "tr_mer" | "constant:a,b,c" | "csv:PATH"
Trace parse_trace(const std::string& spec) {
    if (spec == "tr_mer") return Trace::tr_mer();
    if (spec.rfind("constant:", 0) == 0) {
        double a, b, c;
        if (std::sscanf(spec.c_str() + 9, "%lg,%lg,%lg", &a, &b, &c) != 3)
            throw std::invalid_argument("constant trace needs three values: constant:a,b,c");
        Trace tr = Trace::constant(a, b, c);
        validate_trace(tr);
        return tr;
    }
    if (spec.rfind("csv:", 0) == 0) {
        Trace tr = Trace::from_csv(spec.substr(4));
        validate_trace(tr);
        return tr;
    }
    throw std::invalid_argument("unknown trace '" + spec +
                                "' (expected tr_mer, constant:a,b,c or csv:PATH)");
}

struct RunSetup {
    int n = 128;
    std::string trace = "tr_mer";
    SolverConfig solver;
};

// envelope config: {"n": int, "trace": str, "solver": {...}}
RunSetup load_setup(const std::string& configPath) {
    RunSetup s;
    if (configPath.empty()) return s;
    std::ifstream in(configPath);
    if (!in) throw std::invalid_argument("cannot read config " + configPath);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error: " + std::string(e.what()));
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (auto& [key, val] : j.items()) {
        if (key == "n") {
            if (!val.is_number_integer() || val.get<int>() < 16)
                throw std::invalid_argument("config: n must be an integer >= 16");
            s.n = val.get<int>();
        } else if (key == "trace") {
            if (!val.is_string()) throw std::invalid_argument("config: trace must be a string");
            s.trace = val.get<std::string>();
        } else if (key == "solver") {
            s.solver = SolverConfig::from_json_text(val.dump());
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    return s;
}

std::string profile_csv(const FrequencyProfile& p) {
    std::string out = "r,E,H,N\n";
    char line[160];
    for (std::size_t k = 0; k < p.radii.size(); ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", p.radii[k], p.E[k],
                      p.H[k], p.N[k]);
        out += line;
    }
    return out;
}

json report_scalars(const SolveReport& rep) {
    const EnergyBreakdown& e = rep.energyHistory.back();
    return {{"beta", e.beta},
            {"sweeps", rep.sweeps},
            {"converged", rep.converged},
            {"acceptedSweeps", rep.energyHistory.size() - 1},
            {"energy",
             {{"dirichlet", e.dirichlet}, {"penalty", e.penalty}, {"total", e.total}}},
            {"penaltyResidual", rep.penaltyResidual}};
}

std::string energy_csv(const SolveReport& rep) {
    std::string out = "step,dirichlet,penalty,total\n";
    char line[160];
    for (std::size_t k = 0; k < rep.energyHistory.size(); ++k) {
        const auto& e = rep.energyHistory[k];
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", k, e.dirichlet,
                      e.penalty, e.total);
        out += line;
    }
    return out;
}

int cmd_exact(int n, double rmin, double rmax, int k, const fs::path& out) {
    start_run(out, "exact", "");
    Grid g = build_grid(DomainKind::Disc, n);
    Field3 f = exact_minimizer(g);
    dump_csv(g, f, (out / "field.csv").string());
    // closed-form ladder, bypassing quadrature: N is exactly 3/4
    std::string csv = "r,E,H,N\n";
    char line[160];
    for (int i = 0; i <= k; ++i) {
        double r = rmin * std::pow(rmax / rmin, static_cast<double>(i) / k);
        ExactFrequency v = exact_frequency_values(r);
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", r, v.E, v.H, v.N);
        csv += line;
    }
    write_text(out / "profile.csv", csv);
    json j = {{"c_infty", exact_total_energy()},
              {"n", n},
              {"dirichlet", dirichlet_energy(g, f)}};
    write_text(out / "exact.json", j.dump(2) + "\n");
    return 0;
}

int cmd_solve(const RunSetup& s, std::optional<double> beta, const fs::path& out,
              const std::string& configPath) {
    Trace tr = parse_trace(s.trace);  // validate before creating outputs
    start_run(out, "solve", configPath);
    Grid g = build_grid(DomainKind::Disc, s.n);
    BoundaryData bd = sample_boundary(g, tr);
    SolveReport rep;
    if (s.solver.mode == SolveMode::HardConstraint) {
        rep = solve_hard_constraint(g, bd, s.solver);
    } else {
        double b = beta ? *beta
                        : (s.solver.betaLadder.empty() ? 0.0 : s.solver.betaLadder.back());
        rep = solve_penalized(g, bd, b, s.solver);
    }
    dump_csv(g, rep.field, (out / "field.csv").string());
    write_text(out / "energy.csv", energy_csv(rep));
    json j = report_scalars(rep);
    j["n"] = s.n;
    j["trace"] = s.trace;
    write_text(out / "report.json", j.dump(2) + "\n");
    return rep.converged ? 0 : 2;
}

int cmd_sweep(const RunSetup& s, const std::vector<double>& betaOverride,
              const fs::path& out, const std::string& configPath) {
    Trace tr = parse_trace(s.trace);
    SolverConfig cfg = s.solver;
    if (!betaOverride.empty()) cfg.betaLadder = betaOverride;
    start_run(out, "sweep", configPath);
    Grid g = build_grid(DomainKind::Disc, s.n);
    BoundaryData bd = sample_boundary(g, tr);
    std::vector<SolveReport> ladder = sweep_beta(g, bd, cfg);
    json arr = json::array();
    bool allConverged = true;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "field_b%zu.csv", i);
        dump_csv(g, ladder[i].field, (out / name).string());
        std::snprintf(name, sizeof name, "energy_b%zu.csv", i);
        write_text(out / name, energy_csv(ladder[i]));
        json r = report_scalars(ladder[i]);
        r["index"] = i;
        arr.push_back(std::move(r));
        allConverged = allConverged && ladder[i].converged;
    }
    json j = {{"n", s.n},
              {"trace", s.trace},
              {"reports", std::move(arr)},
              {"penaltyDrop", ladder.front().penaltyResidual /
                                  std::max(ladder.back().penaltyResidual, 1e-300)}};
    write_text(out / "sweep.json", j.dump(2) + "\n");
    return allConverged ? 0 : 2;
}

int cmd_frequency(const std::string& fieldPath, std::array<double, 2> center, double rmin,
                  double rmax, int k, double beta, const fs::path& out) {
    auto [g, f] = load_csv(fieldPath);
    start_run(out, "frequency", fieldPath);
    bool includePenalty = beta > 0;
    FrequencyProfile p = frequency_profile(g, f, center, rmin, rmax, k, includePenalty, beta);
    write_text(out / "profile.csv", profile_csv(p));
    MonotoneReport mono = check_monotone(p, 0.02);
    ExponentFit fit = estimate_exponent(p);
    double worstPoh = 0.0;
    for (double r : p.radii)
        worstPoh = std::max(worstPoh, pohozaev_residual(g, f, center, r));
    json j = {{"center", {center[0], center[1]}},
              {"rmin", rmin},
              {"rmax", rmax},
              {"includePenalty", includePenalty},
              {"beta", beta},
              {"gamma", fit.gamma},
              {"r2", fit.r2},
              {"monotoneOk", mono.ok},
              {"worstDrop", mono.worstDrop},
              {"pohozaevWorst", worstPoh}};
    write_text(out / "summary.json", j.dump(2) + "\n");
    return 0;
}

int cmd_nodal(const std::string& fieldPath, const std::string& tauSpec, const fs::path& out) {
    auto [g, f] = load_csv(fieldPath);
    double tau = tauSpec == "holder" ? holder_tau(g) : std::stod(tauSpec);
    start_run(out, "nodal", fieldPath);
    NodalClassification nc = classify_nodal(g, f, tau);
    json triples = json::array();
    for (const auto& tp : nc.triplePoints)
        triples.push_back({{"x", tp.x}, {"y", tp.y}, {"cells", tp.cells}});
    json files = json::array();
    for (auto [ci, cj] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        char name[64];
        std::snprintf(name, sizeof name, "interface_%d-%d.csv", ci + 1, cj + 1);
        std::string csv = "segment_id,x,y\n";
        char line[120];
        int seg = 0;
        for (const auto& pl : nc.interfaces) {
            if (pl.ci != ci || pl.cj != cj) continue;
            for (const auto& p : pl.pts) {
                std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", seg, p[0], p[1]);
                csv += line;
            }
            ++seg;
        }
        write_text(out / name, csv);
        files.push_back(name);
    }
    json j = {{"tau", tau},
              {"triple_points", std::move(triples)},
              {"loop_count", nc.loopCount},
              {"partition_ok", nc.partition.partitionOk},
              {"zero_closure_ok", nc.partition.zeroSetClosureOk},
              {"degenerate_component", nc.partition.degenerateComponent},
              {"interface_files", std::move(files)}};
    write_text(out / "nodal.json", j.dump(2) + "\n");
    return 0;
}

int cmd_verify(const std::string& level, const fs::path& out) {
    if (!out.empty()) start_run(out, "verify", "");
    auto rs = run_verification(level);
    bool all = true;
    for (const auto& r : rs) {
        std::printf("[%s] %2d %-24s %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.details.c_str(), r.seconds);
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "all criteria passed" : "criteria FAILED");
    if (!out.empty()) write_text(out / "verify.json", verification_json(rs));
    return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for partially segregated harmonic triples"};
    app.require_subcommand(1);

    std::string configPath, traceSpec, fieldPath, outDir, level = "quick";
    std::string tauSpec = std::to_string(kDefaultTau);
    int n = 128, ladderK = 16;
    double rmin = 0.05, rmax = 0.4, betaFreq = 0.0;
    std::vector<double> betas;
    std::array<double, 2> center{0.0, 0.0};
    std::uint64_t seed = 0;
    bool seedSet = false, nSet = false, traceSet = false;

    auto* cExact = app.add_subcommand("exact", "sample the homogeneous triple and its profile");
    cExact->add_option("--n", n, "grid size");
    cExact->add_option("--rmin", rmin, "ladder start")->check(CLI::PositiveNumber);
    cExact->add_option("--rmax", rmax, "ladder end")->check(CLI::PositiveNumber);
    cExact->add_option("--k", ladderK, "ladder steps");
    cExact->add_option("--out", outDir, "output directory")->required();

    auto* cSolve = app.add_subcommand("solve", "minimize at a single penalty strength");
    auto* cSweep = app.add_subcommand("sweep", "minimize along the penalty ladder");
    for (CLI::App* c : {cSolve, cSweep}) {
        c->add_option("--config", configPath, "JSON config: {n, trace, solver{...}}");
        c->add_option("--n", n, "grid size")->each([&](const std::string&) { nSet = true; });
        c->add_option("--trace", traceSpec, "tr_mer | constant:a,b,c | csv:PATH")
            ->each([&](const std::string&) { traceSet = true; });
        c->add_option("--beta", betas, "penalty strength(s)");
        c->add_option("--seed", seed, "rng seed")->each([&](const std::string&) {
            seedSet = true;
        });
        c->add_option("--out", outDir, "output directory")->required();
    }

    auto* cFreq = app.add_subcommand("frequency", "Almgren profile of a stored field");
    cFreq->add_option("--field", fieldPath, "field CSV")->required();
    cFreq->add_option("--center", center, "probe center (two values: x y)");
    cFreq->add_option("--rmin", rmin, "ladder start");
    cFreq->add_option("--rmax", rmax, "ladder end");
    cFreq->add_option("--k", ladderK, "ladder steps");
    cFreq->add_option("--beta", betaFreq, "include the penalty term at this strength");
    cFreq->add_option("--out", outDir, "output directory")->required();

    auto* cNodal = app.add_subcommand("nodal", "nodal-set classification of a stored field");
    cNodal->add_option("--field", fieldPath, "field CSV")->required();
    cNodal->add_option("--tau", tauSpec, "zero threshold (number or 'holder')");
    cNodal->add_option("--out", outDir, "output directory")->required();

    auto* cVerify = app.add_subcommand("verify", "run the release checks");
    cVerify->add_option("--level", level, "quick | full")
        ->check(CLI::IsMember({"quick", "full"}));
    cVerify->add_option("--out", outDir, "optional output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints message or help
        return code == 0 ? 0 : 1;
    }

    try {
        if (cExact->parsed()) return cmd_exact(n, rmin, rmax, ladderK, outDir);
        if (cSolve->parsed() || cSweep->parsed()) {
            RunSetup s = load_setup(configPath);
            if (nSet) s.n = n;
            if (traceSet) s.trace = traceSpec;
            if (seedSet) s.solver.seed = seed;
            if (cSolve->parsed()) {
                std::optional<double> b;
                if (!betas.empty()) b = betas.front();
                return cmd_solve(s, b, outDir, configPath);
            }
            return cmd_sweep(s, betas, outDir, configPath);
        }
        if (cFreq->parsed())
            return cmd_frequency(fieldPath, center, rmin, rmax, ladderK, betaFreq, outDir);
        if (cNodal->parsed()) return cmd_nodal(fieldPath, tauSpec, outDir);
        if (cVerify->parsed()) return cmd_verify(level, outDir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
