// cmclab command line front end.
//
// Subcommands:
//   check    exact integrability/smoothness analysis of a potential
//   dress    apply a dressing plan and emit the transformed potential
//   surface  run the full construction and export meshes
//   oracle   cross-check the exact verdicts against the numeric transports
//
// Exit codes: 0 success, 2 validation failure, 3 non-integrable,
// 4 non-smooth, 5 numeric divergence.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "cmclab/birkhoff.hpp"
#include "cmclab/classify.hpp"
#include "cmclab/diagnostics.hpp"
#include "cmclab/dressing.hpp"
#include "cmclab/gminus.hpp"
#include "cmclab/iwasawa.hpp"
#include "cmclab/mesh.hpp"
#include "cmclab/mesh_io.hpp"
#include "cmclab/parse.hpp"

using namespace cmclab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNotIntegrable = 3;
constexpr int kExitNotSmooth = 4;
constexpr int kExitNumeric = 5;

struct PotentialArgs {
    std::string f_text, e_text, file, domain = "plane";

    void attach(CLI::App* cmd) {
        cmd->add_option("--f", f_text, "rational expression for f");
        cmd->add_option("--E", e_text, "rational expression for E (the Hopf coefficient)");
        cmd->add_option("--potential", file, "potential file with f = ... / E = ... lines");
        cmd->add_option("--domain", domain, "plane or disk")
            ->check(CLI::IsMember({"plane", "disk"}));
    }

    ValidationResult load(bool allow_zero_hopf) const {
        RationalMap f, e;
        Domain dom = domain == "disk" ? Domain::UnitDisk : Domain::Plane;
        if (!file.empty()) {
            PotentialFile pf = load_potential_file(file);
            f = pf.f;
            e = pf.hopf;
            if (pf.unit_disk) dom = Domain::UnitDisk;
        }
        if (!f_text.empty()) f = parse_rational_map(f_text);
        if (!e_text.empty()) e = parse_rational_map(e_text);
        if (f.is_zero() && f_text.empty() && file.empty())
            throw ParseError("no potential given: use --f/--E or --potential");
        return validate_potential(f, e, dom, allow_zero_hopf);
    }
};

std::string out_dir() {
    const char* env = std::getenv("CMCLAB_OUT_DIR");
    return env ? std::string(env) : std::string();
}

std::string resolve_out(const std::string& path) {
    std::string dir = out_dir();
    if (dir.empty() || path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(dir) / p).string();
}

class Report {
  public:
    void kv(const std::string& key, const std::string& value) {
        lines_ += key + " = " + value + "\n";
    }
    void kv(const std::string& key, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        kv(key, std::string(buf));
    }
    void kv(const std::string& key, int v) { kv(key, std::to_string(v)); }
    void kv(const std::string& key, bool v) { kv(key, std::string(v ? "true" : "false")); }

    void emit(const std::string& path) const {
        std::cout << lines_;
        if (path.empty()) return;
        std::ofstream out(resolve_out(path), std::ios::binary);
        if (!out) throw IoError(path);
        out << lines_;
    }

  private:
    std::string lines_;
};

std::string cd_str(Cd z) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.9g %.9g", z.real(), z.imag());
    return buf;
}

void describe_verdicts(Report& rep, const Potential& p, const std::vector<SingularityVerdict>& vs) {
    rep.kv("f", to_string(p.f));
    rep.kv("E", to_string(p.hopf));
    rep.kv("domain", std::string(p.domain == Domain::Plane ? "plane" : "disk"));
    rep.kv("singularities", static_cast<int>(vs.size()));
    bool all_integrable = true, all_smooth = true;
    for (size_t i = 0; i < vs.size(); ++i) {
        const auto& v = vs[i];
        std::string pre = "singularity." + std::to_string(i) + ".";
        if (v.z0) rep.kv(pre + "location", to_string(*v.z0));
        rep.kv(pre + "location_numeric", cd_str(v.location));
        rep.kv(pre + "kind", std::string(v.f_order < 0 ? "pole" : "zero"));
        rep.kv(pre + "n", v.n());
        rep.kv(pre + "m", v.e_order);
        if (v.report) {
            std::ostringstream obs;
            bool first = true;
            const MuPolynomial& o = v.report->obstruction;
            if (o.is_zero()) obs << "0";
            for (int k = 0; k <= o.degree(); ++k) {
                if (o.coeff(k).is_zero()) continue;
                if (!first) obs << " + ";
                obs << "(" << to_string(o.coeff(k)) << ")mu^" << k;
                first = false;
            }
            rep.kv(pre + "obstruction", obs.str());
        }
        rep.kv(pre + "integrable", v.integrable);
        rep.kv(pre + "verdict_exact", v.exact_verdict);
        rep.kv(pre + "branch", v.branch);
        rep.kv(pre + "smooth", v.smooth);
        if (v.witness_r) rep.kv(pre + "witness_r", *v.witness_r);
        all_integrable &= v.integrable;
        all_smooth &= v.smooth;
    }
    rep.kv("summary.integrable", all_integrable);
    rep.kv("summary.smooth", all_smooth);
}

int verdict_exit(const std::vector<SingularityVerdict>& vs) {
    for (const auto& v : vs)
        if (!v.integrable) return kExitNotIntegrable;
    for (const auto& v : vs)
        if (!v.smooth) return kExitNotSmooth;
    return kExitOk;
}

int report_violations(const ValidationResult& res) {
    for (const auto& v : res.violations) std::cout << "invalid: " << v.message << "\n";
    return kExitValidation;
}

// --- dress plan parsing --------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trimmed(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// step syntax:  U t=-4 | V t=1/2+1/3i | U critical@1/4 | D t=ln(2) | D scale=4
DressingStep parse_step(const std::string& text, const DressingState& state) {
    std::istringstream is(text);
    std::string gen, arg;
    is >> gen >> arg;
    if (gen.empty() || arg.empty()) throw ParseError("dressing step needs 'GEN arg': " + text);
    DressingStep step;
    if (gen == "U")
        step.generator = Generator::U;
    else if (gen == "V")
        step.generator = Generator::V;
    else if (gen == "D")
        step.generator = Generator::D;
    else
        throw ParseError("unknown generator '" + gen + "'");

    if (arg.rfind("critical@", 0) == 0) {
        if (step.generator == Generator::D) throw ParseError("D has no critical parameter");
        ComplexRational z1 = parse_complex_rational(arg.substr(9));
        const RationalMap& anti = step.generator == Generator::U ? state.b1 : state.c1;
        if (!anti.finite_at(z1)) throw BlockedError(to_cd(z1));
        ComplexRational val = anti.eval(z1);
        if (val.is_zero()) throw BlockedError(to_cd(z1));
        step.t = -inverse(val);
        return step;
    }
    auto eq = arg.find('=');
    if (eq == std::string::npos) throw ParseError("step argument needs key=value: " + text);
    std::string key = arg.substr(0, eq), val = arg.substr(eq + 1);
    if (step.generator == Generator::D) {
        if (key == "scale") {
            step.scale = parse_complex_rational(val);
        } else if (key == "t") {
            if (val.rfind("ln(", 0) == 0 && val.back() == ')') {
                // exact scale: e^{2 ln q} = q^2
                ComplexRational q = parse_complex_rational(val.substr(3, val.size() - 4));
                step.scale = q * q;
            } else {
                ComplexRational t = parse_complex_rational(val);
                if (!t.is_zero())
                    throw ParseError("exact D steps need t=0, t=ln(q) or scale=q; got " + val);
                step.scale = ComplexRational(1);
            }
        } else {
            throw ParseError("D step takes t= or scale=");
        }
        return step;
    }
    if (key != "t") throw ParseError("U/V steps take t=<exact complex rational>");
    step.t = parse_complex_rational(val);
    return step;
}

// --- subcommand bodies -----------------------------------------------------------

int cmd_check(const PotentialArgs& pargs, const std::string& report_path) {
    ValidationResult res = pargs.load(false);
    if (!res.ok()) return report_violations(res);
    auto verdicts = classify_all(*res.potential);
    Report rep;
    describe_verdicts(rep, *res.potential, verdicts);
    rep.emit(report_path);
    return verdict_exit(verdicts);
}

int cmd_dress(const PotentialArgs& pargs, const std::string& plan_text,
              const std::string& plan_file, const std::string& out_file,
              const std::string& report_path) {
    ValidationResult res = pargs.load(false);
    if (!res.ok()) return report_violations(res);
    std::string plan = plan_text;
    if (!plan_file.empty()) {
        std::ifstream in(plan_file);
        if (!in) throw IoError(plan_file);
        std::ostringstream ss;
        ss << in.rdbuf();
        plan = ss.str();
    }
    DressingState state = make_dressing_state(*res.potential);
    Report rep;
    int index = 0;
    for (std::string& raw : split(plan, ';')) {
        std::string text = trimmed(raw);
        if (text.empty()) continue;
        DressingStep step = parse_step(text, state);
        state = apply_step(state, step);
        std::string pre = "step." + std::to_string(index++) + ".";
        rep.kv(pre + "generator", std::string(1, generator_letter(step.generator)));
        if (step.generator == Generator::D)
            rep.kv(pre + "scale", to_string(step.scale));
        else
            rep.kv(pre + "t", to_string(step.t));
        rep.kv(pre + "f", to_string(state.potential.f));
    }
    if (!out_file.empty()) {
        std::ofstream out(resolve_out(out_file), std::ios::binary);
        if (!out) throw IoError(out_file);
        out << "f = " << to_string(state.potential.f) << "\n";
        out << "E = " << to_string(state.potential.hopf) << "\n";
        out << "domain = " << (state.potential.domain == Domain::Plane ? "plane" : "disk") << "\n";
    }
    auto verdicts = classify_all(state.potential);
    describe_verdicts(rep, state.potential, verdicts);
    rep.emit(report_path);
    return verdict_exit(verdicts);
}

struct GridSpecArg {
    std::string text = "rect:-1,-1,1,1";

    DomainGrid parse(int nu, int nv) const {
        DomainGrid g;
        g.nu = nu;
        g.nv = nv;
        auto parts = split(text, ':');
        if (parts.size() != 2) throw ParseError("grid spec: rect:x0,y0,x1,y1 | disk:R[@cx,cy] | annulus:rin,rout[@cx,cy]");
        std::string body = parts[1];
        Cd center(0, 0);
        auto at = body.find('@');
        if (at != std::string::npos) {
            auto cs = split(body.substr(at + 1), ',');
            if (cs.size() != 2) throw ParseError("grid center needs cx,cy");
            center = Cd(std::stod(cs[0]), std::stod(cs[1]));
            body = body.substr(0, at);
        }
        auto nums = split(body, ',');
        if (parts[0] == "rect") {
            if (nums.size() != 4) throw ParseError("rect grid needs x0,y0,x1,y1");
            g.kind = DomainGrid::Kind::Rect;
            g.corner0 = Cd(std::stod(nums[0]), std::stod(nums[1]));
            g.corner1 = Cd(std::stod(nums[2]), std::stod(nums[3]));
        } else if (parts[0] == "disk") {
            if (nums.size() != 1) throw ParseError("disk grid needs the radius");
            g.kind = DomainGrid::Kind::Disk;
            g.radius = std::stod(nums[0]);
            g.center = center;
        } else if (parts[0] == "annulus") {
            if (nums.size() != 2) throw ParseError("annulus grid needs rin,rout");
            g.kind = DomainGrid::Kind::Annulus;
            g.inner_radius = std::stod(nums[0]);
            g.radius = std::stod(nums[1]);
            g.center = center;
        } else {
            throw ParseError("unknown grid kind '" + parts[0] + "'");
        }
        return g;
    }
};

int cmd_surface(const PotentialArgs& pargs, const GridSpecArg& gridspec, int nu, int nv,
                std::vector<double> thetas, int trunc, const std::string& out_file, bool ply,
                int jobs, double tol_h, double tol_conf, double tol_iwasawa,
                const std::string& report_path, bool skip_check) {
    ValidationResult res = pargs.load(true);
    if (!res.ok()) return report_violations(res);
    const Potential& p = *res.potential;

    if (!skip_check && !p.hopf.is_zero()) {
        auto verdicts = classify_all(p);
        int code = verdict_exit(verdicts);
        if (code != kExitOk) {
            Report rep;
            describe_verdicts(rep, p, verdicts);
            rep.emit("");
            return code;
        }
    }
    if (thetas.empty()) thetas = {0.0};
    DomainGrid grid = sample_domain(gridspec.parse(nu, nv), p);

    BuildOptions opt;
    opt.jobs = jobs;
    Report rep;
    bool numeric_ok = true;
    for (size_t ti = 0; ti < thetas.size(); ++ti) {
        SurfaceMesh mesh = build_mesh(p, grid, thetas[ti], trunc, opt);
        std::string stem = out_file.empty() ? "surface" : out_file;
        auto dot = stem.rfind('.');
        std::string ext = ply ? ".ply" : ".obj";
        if (dot != std::string::npos && dot > 0) {
            ext = stem.substr(dot);
            stem = stem.substr(0, dot);
        }
        std::string suffix = thetas.size() > 1 ? "_theta" + std::to_string(ti) : "";
        std::string mesh_path = resolve_out(stem + suffix + ext);
        export_mesh(mesh, ply || ext == ".ply" ? MeshFormat::PLY : MeshFormat::OBJ, mesh_path);
        write_mesh_report(mesh, mesh_path + ".report");

        std::string pre = "mesh." + std::to_string(ti) + ".";
        rep.kv(pre + "path", mesh_path);
        rep.kv(pre + "theta", thetas[ti]);
        rep.kv(pre + "vertices", static_cast<int>(mesh.vertices.size()));
        rep.kv(pre + "faces", static_cast<int>(mesh.faces.size()));
        rep.kv(pre + "away_h_defect", mesh.away_h_defect);
        rep.kv(pre + "away_conformality_defect", mesh.away_conformality);
        rep.kv(pre + "max_iwasawa_residual", mesh.max_iwasawa_residual);
        rep.kv(pre + "failed_vertices", mesh.failed_vertices);
        numeric_ok &= mesh.away_h_defect <= tol_h && mesh.away_conformality <= tol_conf &&
                      mesh.max_iwasawa_residual <= tol_iwasawa;
    }
    rep.kv("summary.diagnostics_ok", numeric_ok);
    rep.emit(report_path);
    return numeric_ok ? kExitOk : kExitNumeric;
}

int cmd_oracle(const PotentialArgs& pargs, int trunc, unsigned seed, const std::string& report_path) {
    ValidationResult res = pargs.load(false);
    if (!res.ok()) return report_violations(res);
    const Potential& p = *res.potential;
    Report rep;
    bool consistent = true;

    auto verdicts = classify_all(p);
    rep.kv("singularities", static_cast<int>(verdicts.size()));
    for (size_t i = 0; i < verdicts.size(); ++i) {
        const auto& v = verdicts[i];
        std::string pre = "oracle." + std::to_string(i) + ".";
        rep.kv(pre + "location_numeric", cd_str(v.location));
        double radius = detail::isolation_radius(p, v.location);
        double defect = monodromy_defect_max(p, v.location, radius);
        bool numeric_integrable = defect < 1e-6;
        rep.kv(pre + "monodromy_defect", defect);
        rep.kv(pre + "monodromy_integrable", numeric_integrable);
        if (v.z0) {
            auto report = frobenius_obstruction(p, *v.z0);
            bool exact = report.integrable();
            bool res_zero = residue_test(p, *v.z0, &report).is_zero();
            rep.kv(pre + "obstruction_integrable", exact);
            rep.kv(pre + "residue_integrable", res_zero);
            bool agree = exact == res_zero && exact == numeric_integrable;
            rep.kv(pre + "agreement", agree);
            consistent &= agree;
        }
    }

    // closed-form dressing vs the loop-level Birkhoff resplit
    try {
        DressingState state = make_dressing_state(p);
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> dist(-0.25, 0.25);
        double worst = 0;
        int compared = 0;
        for (int it = 0; it < 6 && compared < 3; ++it) {
            Cd z(0.31 + 0.1 * dist(rng), 0.22 + 0.1 * dist(rng));
            if (path_clearance({Cd(0, 0), z}, potential_singularities(p)) < 5e-2) continue;
            HolomorphicFrame fr = integrate_gminus(p, z, trunc);
            Cd t(dist(rng), dist(rng));
            MatrixLoop h = MatrixLoop::identity(trunc);
            h.at(1)(1, 0) = t;
            BirkhoffSplit split = birkhoff_split(multiply(h, fr.gminus));
            Cd b1 = state.b1.eval_at(z);
            worst = std::max(worst, std::abs(split.minus.at(-1)(0, 1) - b1 / (1.0 + t * b1)));
            ++compared;
        }
        rep.kv("birkhoff.compared_points", compared);
        rep.kv("birkhoff.max_deviation", worst);
        consistent &= worst < 1e-6;
    } catch (const LogarithmicObstruction&) {
        rep.kv("birkhoff.skipped", std::string("potential not meromorphically integrable"));
    }

    rep.kv("summary.consistent", consistent);
    rep.emit(report_path);
    return consistent ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"meromorphic potentials, dressing, and CMC surface construction"};
    app.require_subcommand(1);

    PotentialArgs pargs;
    std::string report_path;

    auto* check = app.add_subcommand("check", "integrability and smoothness analysis");
    PotentialArgs check_args;
    check_args.attach(check);
    std::string check_report;
    check->add_option("--report", check_report, "write the key=value report here as well");

    auto* dress = app.add_subcommand("dress", "apply a dressing plan");
    PotentialArgs dress_args;
    dress_args.attach(dress);
    std::string plan_text, plan_file, dress_out, dress_report;
    dress->add_option("--plan", plan_text, "steps 'U t=-4; V t=1/2; D t=ln(2)'");
    dress->add_option("--plan-file", plan_file, "file with one step per line / ';'-separated");
    dress->add_option("--out", dress_out, "write the dressed potential file here");
    dress->add_option("--report", dress_report);

    auto* surface = app.add_subcommand("surface", "build and export surface meshes");
    PotentialArgs surf_args;
    surf_args.attach(surface);
    GridSpecArg gridspec;
    int nu = 64, nv = 64, trunc = 16, jobs = 1;
    std::vector<double> thetas;
    std::string surf_out = "surface.obj", surf_report;
    bool ply = false, skip_check = false;
    double tol_h = 1e-2, tol_conf = 1e-4, tol_iwasawa = 1e-7;
    surface->add_option("--grid", gridspec.text, "rect:x0,y0,x1,y1 | disk:R[@cx,cy] | annulus:rin,rout[@cx,cy]");
    surface->add_option("--res", [&nu, &nv](const std::vector<std::string>& vals) {
        auto x = vals.back().find('x');
        if (x == std::string::npos) return false;
        nu = std::stoi(vals.back().substr(0, x));
        nv = std::stoi(vals.back().substr(x + 1));
        return nu > 1 && nv > 1;
    }, "lattice resolution NUxNV (default 64x64)");
    surface->add_option("--theta", thetas, "family angles (radians), one mesh each");
    surface->add_option("--trunc", trunc, "lambda truncation N (default 16)");
    surface->add_option("--out", surf_out, "output mesh path (.obj or .ply)");
    surface->add_flag("--ply", ply, "write PLY instead of OBJ");
    surface->add_option("--jobs", jobs, "parallel workers for the lattice");
    surface->add_option("--tol-h", tol_h, "gate on max |H_d + 1/2| away from ends");
    surface->add_option("--tol-conformality", tol_conf);
    surface->add_option("--tol-iwasawa", tol_iwasawa);
    surface->add_flag("--skip-check", skip_check, "build even if the classifier objects");
    surface->add_option("--report", surf_report);

    auto* oracle = app.add_subcommand("oracle", "monodromy and Birkhoff cross-checks");
    PotentialArgs oracle_args;
    oracle_args.attach(oracle);
    int oracle_trunc = 16;
    unsigned oracle_seed = 12345;
    std::string oracle_report;
    oracle->add_option("--trunc", oracle_trunc);
    oracle->add_option("--seed", oracle_seed);
    oracle->add_option("--report", oracle_report);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(check_args, check_report);
        if (dress->parsed())
            return cmd_dress(dress_args, plan_text, plan_file, dress_out, dress_report);
        if (surface->parsed())
            return cmd_surface(surf_args, gridspec, nu, nv, thetas, trunc, surf_out, ply, jobs,
                               tol_h, tol_conf, tol_iwasawa, surf_report, skip_check);
        if (oracle->parsed()) return cmd_oracle(oracle_args, oracle_trunc, oracle_seed, oracle_report);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const LogarithmicObstruction& e) {
        std::cerr << "error: " << e.what() << " near (" << e.pole.real() << ", " << e.pole.imag()
                  << ")\n";
        return kExitValidation;
    } catch (const BlockedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
