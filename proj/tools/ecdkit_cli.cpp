// ecdkit command-line front end: enorm / ecd / verify / study.
// Exit codes: 0 success, 1 property failure, 2 input/usage error,
// 3 internal inconsistency.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "ecdkit/distance.hpp"
#include "ecdkit/enorm.hpp"
#include "ecdkit/serialize.hpp"
#include "ecdkit/truncate.hpp"
#include "ecdkit/verify.hpp"

namespace {

constexpr const char* kVersion = "0.3.1";

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("ECDKIT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

struct GridSpec {
    double lo = 0.0, hi = 0.0;
    int n = 0;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &g.lo, &g.hi, &g.n) != 3)
        throw std::invalid_argument("--grid: expected lo:hi:n");
    if (g.n < 2 || g.lo <= 0.0 || g.hi <= g.lo)
        throw std::invalid_argument("--grid: need 0 < lo < hi and n >= 2");
    return g;
}

void emit_meta(std::ostream& os, std::uint64_t seed, const std::vector<std::string>& inputs) {
    os << "# ecdkit " << kVersion << " seed=" << seed;
    for (const std::string& p : inputs) os << " digest(" << p << ")=" << ecdkit::file_digest(p);
    os << "\n";
}

int run_enorm(const std::string& op_path, const std::string& obs_path, double energy,
              const std::string& grid_spec, std::uint64_t seed) {
    using namespace ecdkit;
    const CMat a = cmat_from_json(load_json_file(op_path));
    const EnergyObservable g = observable_from_json(load_json_file(obs_path));
    std::vector<double> grid;
    if (!grid_spec.empty()) {
        const GridSpec gs = parse_grid(grid_spec);
        grid = log_grid(gs.lo, gs.hi, gs.n);
    } else {
        grid = {energy};
    }
    emit_meta(std::cout, seed, {op_path, obs_path});
    std::cout << "E,value,mu,gap\n";
    for (double e : grid) {
        const ENormCertificate c = e_norm(a, g, e);
        std::cout << fmt12(e) << ',' << fmt12(c.value) << ',' << fmt12(c.mu) << ',' << fmt12(c.gap)
                  << "\n";
    }
    return 0;
}

int run_ecd(const std::string& phi_path, const std::string& psi_path, const std::string& obs_path,
            double energy, bool use_bures, const ecdkit::AscentConfig& cfg) {
    using namespace ecdkit;
    const KrausMap phi = kraus_from_json(load_json_file(phi_path));
    const EnergyObservable g = observable_from_json(load_json_file(obs_path));
    json out;
    out["version"] = kVersion;
    out["seed"] = cfg.seed;
    out["inputs"] = {{phi_path, file_digest(phi_path)}, {obs_path, file_digest(obs_path)}};
    if (psi_path.empty()) {
        const ENormCertificate c = ecd_norm_cp(phi, g, energy);
        out["value"] = c.value;
        out["mu"] = c.mu;
        out["gap"] = c.gap;
        out["exact"] = true;
    } else {
        const KrausMap psi = kraus_from_json(load_json_file(psi_path));
        out["inputs"].push_back({psi_path, file_digest(psi_path)});
        const DistanceReport rep = use_bures ? bures_e_distance(phi, psi, g, energy, cfg)
                                             : ecd_distance(phi, psi, g, energy, cfg);
        out["report"] = to_json(rep);
        if (rep.lower > rep.upper + cfg.tol + 1e-7) {
            std::cerr << "internal inconsistency: lower bound exceeds upper bound\n";
            return 3;
        }
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, int trials, bool sabotage) {
    using namespace ecdkit;
    if (sabotage) testhooks::bound30_sign_flip() = true;
    VerifyOptions opt;
    opt.suite = suite;
    opt.seed = seed;
    opt.trials = trials;
    const VerifyResult res = run_verify(opt);
    std::cout << res.summary;
    return res.failed == 0 ? 0 : 1;
}

int run_study(const std::string& scenario_path, const std::string& out_path) {
    using namespace ecdkit;
    const json sc = load_json_file(scenario_path);
    const Dilation v = dilation_from_json(sc.at("dilation"));
    const EnergyObservable g = observable_from_json(sc.at("observable"));
    const double budget = sc.at("budget").get<double>();
    const std::vector<double> schedule = sc.at("schedule").get<std::vector<double>>();
    AscentConfig cfg;
    if (sc.contains("seed")) cfg.seed = sc.at("seed").get<std::uint64_t>();
    if (sc.contains("restarts")) cfg.restarts = sc.at("restarts").get<int>();
    if (sc.contains("max_iter")) cfg.max_iter = sc.at("max_iter").get<int>();
    const TruncationStudy study = run_truncation_study(v, g, budget, schedule, cfg);

    std::ostringstream os;
    emit_meta(os, cfg.seed, {scenario_path});
    os << study_csv(study);
    if (out_path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open " + out_path);
        f << os.str();
    }
    for (const StudyRow& row : study.rows)
        if (row.lhs_estimate > row.rhs_bound + 1e-6 || row.tail_lhs > row.tail_rhs + 1e-8) {
            std::cerr << "study contract violated at cutoff " << row.cutoff << "\n";
            return 1;
        }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    CLI::App app{"energy-constrained operator norms and channel distances"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string op_path, obs_path, phi_path, psi_path, scenario_path, out_path;
    std::string grid_spec, suite = "all";
    double energy = 1.0;
    bool use_bures = false, sabotage = false;
    int trials = 50;
    ecdkit::AscentConfig cfg;

    CLI::App* c_enorm = app.add_subcommand("enorm", "operator E-norm of a matrix");
    c_enorm->add_option("operator", op_path, "operator JSON")->required();
    c_enorm->add_option("observable", obs_path, "energy observable JSON")->required();
    CLI::Option* o_energy = c_enorm->add_option("--energy", energy, "energy budget E");
    c_enorm->add_option("--grid", grid_spec, "log grid lo:hi:n of budgets")->excludes(o_energy);
    c_enorm->add_option("--seed", cfg.seed, "seed echoed into the output");

    CLI::App* c_ecd = app.add_subcommand("ecd", "ECD norm or distance of Kraus maps");
    c_ecd->add_option("phi", phi_path, "first map JSON")->required();
    c_ecd->add_option("psi", psi_path, "second map JSON (omit for the single-map norm)");
    c_ecd->add_option("--observable", obs_path, "energy observable JSON")->required();
    c_ecd->add_option("--energy", energy, "energy budget E")->required();
    c_ecd->add_flag("--bures", use_bures, "energy-constrained Bures distance instead");
    c_ecd->add_option("--seed", cfg.seed, "ascent seed");
    c_ecd->add_option("--restarts", cfg.restarts, "ascent restarts")->check(CLI::PositiveNumber);
    c_ecd->add_option("--max-iter", cfg.max_iter, "ascent iteration cap")
        ->check(CLI::PositiveNumber);
    c_ecd->add_option("--tol", cfg.tol, "ascent stationarity tolerance")
        ->check(CLI::PositiveNumber);

    CLI::App* c_verify = app.add_subcommand("verify", "run the property suites");
    c_verify->add_option("--suite", suite, "matcore|energy|enorm|channel|distance|truncate|all");
    c_verify->add_option("--seed", cfg.seed, "suite seed");
    c_verify->add_option("--trials", trials, "trial count per sampled check")
        ->check(CLI::PositiveNumber);
    c_verify
        ->add_flag("--sabotage-bound30", sabotage,
                   "test-only: flip the bound-30 rhs sign to prove detection")
        ->group("");  // hidden

    CLI::App* c_study = app.add_subcommand("study", "truncation-error study CSV");
    c_study->add_option("scenario", scenario_path, "scenario JSON")->required();
    c_study->add_option("--out", out_path, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (c_enorm->parsed()) {
            if (grid_spec.empty() && o_energy->count() == 0)
                throw std::invalid_argument("enorm: need --energy or --grid");
            return run_enorm(op_path, obs_path, energy, grid_spec, cfg.seed);
        }
        if (c_ecd->parsed()) return run_ecd(phi_path, psi_path, obs_path, energy, use_bures, cfg);
        if (c_verify->parsed()) return run_verify(suite, cfg.seed, trials, sabotage);
        if (c_study->parsed()) return run_study(scenario_path, out_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
