// billiard-cli: command-line front end over the billiards library.
//
// Subcommands: validate, portrait, families, twist, manifolds, gutkin.
// JSON reports go to standard output (and to --out when given); portrait
// writes CSV to --out plus a .status.json sidecar; manifolds optionally
// dumps polylines as CSV.  Exit codes: 0 ok, 1 input error, 2 validation
// fail, 3 analysis error.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "billiards/config_io.hpp"
#include "billiards/dynamics.hpp"
#include "billiards/errors.hpp"
#include "billiards/geometry.hpp"
#include "billiards/hyperbolic.hpp"
#include "billiards/invariant_curves.hpp"
#include "billiards/parallel.hpp"
#include "billiards/symmetric_orbits.hpp"

namespace {

using namespace billiards;

constexpr int kSchemaVersion = 1;
constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------
// output helpers: deterministic 17-significant-digit floats, insertion-
// ordered JSON
// ---------------------------------------------------------------------

std::string fmt_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

// Emits JSON with fields in insertion order and 2-space indentation.
class JsonWriter {
public:
    void obj_open(const std::string& key = "") { open(key, '{'); }
    void obj_close() { close('}'); }
    void arr_open(const std::string& key = "") { open(key, '['); }
    void arr_close() { close(']'); }

    void field(const std::string& key, double v) { scalar(key, fmt_double(v)); }
    void field(const std::string& key, int v) { scalar(key, std::to_string(v)); }
    void field(const std::string& key, bool v) { scalar(key, v ? "true" : "false"); }
    void field(const std::string& key, const std::string& v) {
        scalar(key, "\"" + json_escape(v) + "\"");
    }
    void field(const std::string& key, const char* v) {
        field(key, std::string(v));
    }
    void null_field(const std::string& key) { scalar(key, "null"); }
    void elem(double v) { scalar("", fmt_double(v)); }

    std::string str() const { return out_ + "\n"; }

private:
    void pad() {
        if (needComma_) out_ += ",";
        if (!out_.empty()) out_ += "\n";
        out_.append(2 * depth_, ' ');
    }
    void open(const std::string& key, char c) {
        pad();
        if (!key.empty()) out_ += "\"" + key + "\": ";
        out_ += c;
        ++depth_;
        needComma_ = false;
    }
    void close(char c) {
        --depth_;
        if (needComma_) { // container had content; drop to its own line
            out_ += "\n";
            out_.append(2 * depth_, ' ');
        }
        out_ += c;
        needComma_ = true;
    }
    void scalar(const std::string& key, const std::string& text) {
        pad();
        if (!key.empty()) out_ += "\"" + key + "\": ";
        out_ += text;
        needComma_ = true;
    }

    std::string out_;
    int depth_ = 0;
    bool needComma_ = false;
};

// ---------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------

struct CommonArgs {
    std::string configPath;
    std::string outPath;
    std::vector<std::string> tolArgs;
    int workers = 1;
};

// Per-command tolerance registry.  Every value that gates or parameterizes
// the run is listed here with its default, can be overridden on the
// command line, and is echoed verbatim in the report metadata.
using Tolerances = std::map<std::string, double>;

void apply_tolerance_args(Tolerances& tols,
                          const std::vector<std::string>& args) {
    for (const std::string& a : args) {
        std::size_t eq = a.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--tolerance needs NAME=VALUE, got '" +
                                        a + "'");
        std::string name = a.substr(0, eq);
        auto it = tols.find(name);
        if (it == tols.end())
            throw std::invalid_argument("unknown tolerance '" + name + "'");
        char* end = nullptr;
        const char* c = a.c_str() + eq + 1;
        double v = std::strtod(c, &end);
        if (end == c || *end != '\0')
            throw std::invalid_argument("bad tolerance value in '" + a + "'");
        it->second = v;
    }
}

void write_tolerances(JsonWriter& w, const Tolerances& tols) {
    w.obj_open("tolerances");
    for (const auto& [name, value] : tols) w.field(name, value);
    w.obj_close();
}

void write_config(JsonWriter& w, const CurveConfig& cfg) {
    w.obj_open("config");
    w.field("n", cfg.n);
    w.field("a0", cfg.a0);
    w.arr_open("harmonics");
    for (const Harmonic& h : cfg.harmonics) {
        w.obj_open();
        w.field("k", h.k);
        w.field("cos", h.cosAmp);
        w.field("sin", h.sinAmp);
        w.obj_close();
    }
    w.arr_close();
    if (cfg.bump) {
        w.obj_open("bump");
        w.field("center", cfg.bump->center);
        w.field("eps", cfg.bump->eps);
        w.field("power", cfg.bump->power);
        w.field("delta1", cfg.bump->delta1);
        w.field("delta2", cfg.bump->delta2);
        w.obj_close();
    } else {
        w.null_field("bump");
    }
    w.obj_close();
}

// Report goes to stdout, and also to --out when given.
void emit(const std::string& text, const std::string& outPath) {
    std::cout << text;
    if (!outPath.empty()) {
        std::ofstream f(outPath);
        if (!f) throw std::invalid_argument("cannot write '" + outPath + "'");
        f << text;
    }
}

int emit_analysis_error(const std::string& command, const char* type,
                        const std::string& message,
                        const std::string& outPath) {
    JsonWriter w;
    w.obj_open();
    w.field("schemaVersion", kSchemaVersion);
    w.field("command", command);
    w.obj_open("error");
    w.field("type", type);
    w.field("message", message);
    w.obj_close();
    w.obj_close();
    emit(w.str(), outPath);
    return 3;
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::Elliptic: return "elliptic";
        case Stability::Hyperbolic: return "hyperbolic";
        default: return "parabolic";
    }
}

// ---------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------

int cmd_validate(const CommonArgs& args) {
    Tolerances tols; // validate has no tunable thresholds
    apply_tolerance_args(tols, args.tolArgs);
    CurveConfig cfg = load_curve_config(args.configPath);
    std::shared_ptr<const Curve> curve = build_curve(cfg);
    ValidationReport rep = validate(*curve);

    JsonWriter w;
    w.obj_open();
    w.field("schemaVersion", kSchemaVersion);
    w.field("command", "validate");
    write_config(w, cfg);
    write_tolerances(w, tols);
    w.field("pass", rep.pass);
    w.field("minG", rep.minG);
    w.field("phiMinG", rep.phiMinG);
    w.field("minR", rep.minR);
    w.field("phiMinR", rep.phiMinR);
    w.field("samples", rep.samples);
    w.obj_close();
    emit(w.str(), args.outPath);
    return rep.pass ? 0 : 2;
}

// ---------------------------------------------------------------------
// portrait
// ---------------------------------------------------------------------

struct SeedTrace {
    std::vector<PhasePoint> rows; // rows[0] is the seed itself
    std::string error;            // nonempty when truncated
};

int cmd_portrait(const CommonArgs& args, const std::string& gridArg,
                 const std::string& pRangeArg, int iters) {
    Tolerances tols;
    apply_tolerance_args(tols, args.tolArgs);
    CurveConfig cfg = load_curve_config(args.configPath);
    Oval oval(build_curve(cfg));

    int nPhi = 0, nP = 0;
    if (std::sscanf(gridArg.c_str(), "%dx%d", &nPhi, &nP) != 2 || nPhi < 1 ||
        nP < 1)
        throw std::invalid_argument("--grid needs NxM with N,M >= 1");
    double pMin = 0.0, pMax = 0.0;
    if (std::sscanf(pRangeArg.c_str(), "%lf,%lf", &pMin, &pMax) != 2)
        throw std::invalid_argument("--p-range needs pMin,pMax");
    // Strictly inside (-1, 1); seeds inside the grazing cutoff band are
    // legal input and get truncated at step time (recorded in the sidecar).
    if (!(pMin <= pMax) || !(pMin > -1.0) || !(pMax < 1.0))
        throw std::invalid_argument("--p-range must lie strictly inside (-1,1)");
    if (iters < 1) throw std::invalid_argument("--iters must be >= 1");
    if (args.outPath.empty())
        throw std::invalid_argument("portrait requires --out");

    const std::size_t nSeeds = std::size_t(nPhi) * std::size_t(nP);
    std::vector<SeedTrace> traces(nSeeds);
    parallel_for(nSeeds, args.workers, [&](std::size_t s) {
        int i = int(s) / nP, j = int(s) % nP;
        double phi = 2.0 * kPi * i / nPhi;
        double p = (nP == 1) ? (pMin + pMax) / 2.0
                             : pMin + (pMax - pMin) * j / (nP - 1);
        SeedTrace& t = traces[s];
        PhasePoint x{phi, p};
        t.rows.push_back(x);
        for (int k = 0; k < iters; ++k) {
            try {
                x = billiard_step(oval, x).next;
            } catch (const BilliardError& e) {
                t.error = e.what();
                break;
            }
            t.rows.push_back(x);
        }
    });

    std::ofstream csv(args.outPath);
    if (!csv)
        throw std::invalid_argument("cannot write '" + args.outPath + "'");
    csv << "seedIndex,iter,phi,p\n";
    for (std::size_t s = 0; s < nSeeds; ++s)
        for (std::size_t k = 0; k < traces[s].rows.size(); ++k)
            csv << s << "," << k << "," << fmt_double(traces[s].rows[k].phi)
                << "," << fmt_double(traces[s].rows[k].p) << "\n";
    csv.close();

    JsonWriter w;
    w.obj_open();
    w.field("schemaVersion", kSchemaVersion);
    w.field("command", "portrait");
    write_config(w, cfg);
    write_tolerances(w, tols);
    w.field("grazingCutoff", kGrazingTol);
    w.obj_open("grid");
    w.field("nPhi", nPhi);
    w.field("nP", nP);
    w.obj_close();
    w.arr_open("pRange");
    w.elem(pMin);
    w.elem(pMax);
    w.arr_close();
    w.field("iters", iters);
    w.field("seeds", int(nSeeds));
    w.arr_open("truncated");
    for (std::size_t s = 0; s < nSeeds; ++s) {
        if (traces[s].error.empty()) continue;
        w.obj_open();
        w.field("seedIndex", int(s));
        w.field("rows", int(traces[s].rows.size()));
        w.field("error", traces[s].error);
        w.obj_close();
    }
    w.arr_close();
    w.obj_close();
    std::ofstream status(args.outPath + ".status.json");
    if (!status)
        throw std::invalid_argument("cannot write status sidecar");
    status << w.str();
    return 0;
}

// ---------------------------------------------------------------------
// families
// ---------------------------------------------------------------------

int cmd_families(const CommonArgs& args) {
    Tolerances tols{{"closure", 1e-8}};
    apply_tolerance_args(tols, args.tolArgs);
    CurveConfig cfg = load_curve_config(args.configPath);
    Oval oval(build_curve(cfg));

    std::vector<OrbitFamily> families = find_families(oval);

    // re-measure closure against the (possibly overridden) tolerance
    double worstClosure = 0.0;
    for (const OrbitFamily& fam : families) {
        for (const FamilyMember& mem : fam.members) {
            PhasePoint x{fam.phi0, mem.p};
            for (int k = 0; k < mem.period; ++k)
                x = billiard_step(oval, x).next;
            double dphi = std::remainder(x.phi - fam.phi0, 2.0 * kPi);
            double d = std::hypot(dphi, x.p - mem.p);
            worstClosure = std::fmax(worstClosure, d);
        }
    }

    JsonWriter w;
    w.obj_open();
    w.field("schemaVersion", kSchemaVersion);
    w.field("command", "families");
    write_config(w, cfg);
    write_tolerances(w, tols);
    w.field("worstClosure", worstClosure);
    w.arr_open("families");
    for (const OrbitFamily& fam : families) {
        ResonanceFlags rf = resonance_check(oval.curve(), fam.phi0);
        w.obj_open();
        w.field("phi0", fam.phi0);
        w.field("kind", stability_name(fam.kind));
        w.field("gValue", fam.gValue);
        w.field("RValue", fam.RValue);
        w.arr_open("members");
        for (const FamilyMember& mem : fam.members) {
            StabilityReport st = classify(oval, fam, mem.m);
            w.obj_open();
            w.field("m", mem.m);
            w.field("period", mem.period);
            w.field("alpha", mem.alpha);
            w.field("p", mem.p);
            w.field("count", mem.count);
            w.field("L", mem.L);
            w.field("trace", st.trace);
            w.arr_open("eigenvalues");
            for (const std::complex<double>& e : {st.eig1, st.eig2}) {
                w.arr_open();
                w.elem(e.real());
                w.elem(e.imag());
                w.arr_close();
            }
            w.arr_close();
            w.field("resonance3", rf.res3);
            w.field("resonance4", rf.res4);
            double tau = 0.0;
            bool haveTau = false;
            if (fam.kind == Stability::Elliptic && !rf.res3 && !rf.res4) {
                tau = twist_coefficient(oval, fam.phi0, mem.m);
                haveTau = true;
            }
            if (haveTau)
                w.field("tau", tau);
            else
                w.null_field("tau");
            w.obj_close();
        }
        w.arr_close();
        std::optional<int> tzm = tau_zero_m(oval.curve(), fam.phi0);
        if (tzm)
            w.field("tauZeroM", *tzm);
        else
            w.null_field("tauZeroM");
        w.obj_close();
    }
    w.arr_close();
    w.obj_close();
    emit(w.str(), args.outPath);
    return worstClosure <= tols["closure"] ? 0 : 3;
}

// ---------------------------------------------------------------------
// twist
// ---------------------------------------------------------------------

int cmd_twist(const CommonArgs& args, int m) {
    Tolerances tols;
    apply_tolerance_args(tols, args.tolArgs);
    CurveConfig cfg = load_curve_config(args.configPath);
    Oval oval(build_curve(cfg));

    std::vector<OrbitFamily> families = find_families(oval);
    JsonWriter w;
    w.obj_open();
    w.field("schemaVersion", kSchemaVersion);
    w.field("command", "twist");
    write_config(w, cfg);
    write_tolerances(w, tols);
    w.field("m", m);
    w.arr_open("results");
    for (const OrbitFamily& fam : families) {
        if (fam.kind != Stability::Elliptic) continue;
        double tau = twist_coefficient(oval, fam.phi0, m);
        w.obj_open();
        w.field("phi0", fam.phi0);
        w.field("m", m);
        w.field("tau", tau);
        w.obj_close();
    }
    w.arr_close();
    w.obj_close();
    emit(w.str(), args.outPath);
    return 0;
}

// ---------------------------------------------------------------------
// manifolds
// ---------------------------------------------------------------------

int cmd_manifolds(const CommonArgs& args, int m, double maxArc,
                  double phi0Arg, bool havePhi0) {
    Tolerances tols{{"tangency", 1e-4}};
    apply_tolerance_args(tols, args.tolArgs);
    CurveConfig cfg = load_curve_config(args.configPath);
    Oval oval(build_curve(cfg));

    std::vector<OrbitFamily> families = find_families(oval);
    const OrbitFamily* anchor = nullptr;
    for (const OrbitFamily& fam : families) {
        if (fam.kind != Stability::Hyperbolic) continue;
        if (!havePhi0) {
            anchor = &fam;
            break;
        }
        if (!anchor ||
            std::fabs(fam.phi0 - phi0Arg) < std::fabs(anchor->phi0 - phi0Arg))
            anchor = &fam;
    }
    if (!anchor)
        throw NotHyperbolic("manifolds: no hyperbolic family on this curve");

    double pm = std::cos(m * kPi / oval.curve().order());
    QuotientPoint fp{anchor->phi0, pm, m};
    EigenDirections eig = eigen_directions(oval, anchor->phi0, m);

    struct Grown {
        const char* branch;
        int side;
        ManifoldSegment seg;
    };
    std::vector<Grown> segs;
    for (int side : {+1, -1}) {
        segs.push_back(
            {"unstable", side,
             grow_manifold(oval, fp, Branch::Unstable, side, 1e-7, maxArc)});
        segs.push_back(
            {"stable", side,
             grow_manifold(oval, fp, Branch::Stable, side, 1e-7, maxArc)});
    }

    if (!args.outPath.empty()) {
        std::ofstream csv(args.outPath);
        if (!csv)
            throw std::invalid_argument("cannot write '" + args.outPath + "'");
        csv << "branch,side,index,phi,p\n";
        for (const Grown& gseg : segs)
            for (std::size_t i = 0; i < gseg.seg.points.size(); ++i)
                csv << gseg.branch << "," << gseg.side << "," << i << ","
                    << fmt_double(gseg.seg.points[i].x.phi) << ","
                    << fmt_double(gseg.seg.points[i].x.p) << "\n";
    }

    JsonWriter w;
    w.obj_open();
    w.field("schemaVersion", kSchemaVersion);
    w.field("command", "manifolds");
    write_config(w, cfg);
    write_tolerances(w, tols);
    w.field("phi0", anchor->phi0);
    w.field("m", m);
    w.field("maxArc", maxArc);
    w.field("lambdaU", eig.lambdaU);
    w.field("lambdaS", eig.lambdaS);
    w.arr_open("vU");
    w.elem(eig.vU.x);
    w.elem(eig.vU.y);
    w.arr_close();
    w.arr_open("vS");
    w.elem(eig.vS.x);
    w.elem(eig.vS.y);
    w.arr_close();
    w.arr_open("segments");
    for (const Grown& gseg : segs) {
        w.obj_open();
        w.field("branch", gseg.branch);
        w.field("side", gseg.side);
        w.field("points", int(gseg.seg.points.size()));
        w.field("arcLength", gseg.seg.arcLength);
        w.obj_close();
    }
    w.arr_close();
    w.arr_open("crossings");
    for (const Grown& u : segs) {
        if (u.seg.branch != Branch::Unstable) continue;
        for (const Grown& s : segs) {
            if (s.seg.branch != Branch::Stable) continue;
            auto xs =
                find_crossings(oval, u.seg, s.seg, tols["tangency"]);
            for (const CrossingReport& c : xs) {
                w.obj_open();
                w.field("uSide", u.side);
                w.field("sSide", s.side);
                w.field("phi", c.location.phi);
                w.field("p", c.location.p);
                w.field("kind", c.kind == CrossingKind::Transversal
                                    ? "transversal"
                                    : "tangent");
                w.field("slopeU", c.slopeU);
                w.field("slopeS", c.slopeS);
                w.field("dPlus", c.dPlus);
                w.field("dMinus", c.dMinus);
                w.field("gammaU", c.gammaU);
                w.field("gammaS", c.gammaS);
                w.obj_close();
            }
        }
    }
    w.arr_close();
    w.obj_close();
    std::cout << w.str();
    return 0;
}

// ---------------------------------------------------------------------
// gutkin
// ---------------------------------------------------------------------

int cmd_gutkin(const CommonArgs& args, int n, double a1, int seeds,
               int iters) {
    Tolerances tols{{"deviation", 1e-6}};
    apply_tolerance_args(tols, args.tolArgs);

    GutkinResult res = gutkin_verify(n, a1, seeds, iters);
    bool pass = res.maxDeviation < tols["deviation"];

    JsonWriter w;
    w.obj_open();
    w.field("schemaVersion", kSchemaVersion);
    w.field("command", "gutkin");
    w.obj_open("config");
    w.field("n", n);
    w.field("a1", a1);
    w.field("seeds", seeds);
    w.field("iters", iters);
    w.obj_close();
    write_tolerances(w, tols);
    w.arr_open("roots");
    for (std::size_t i = 0; i < res.alpha0.size(); ++i) {
        w.obj_open();
        w.field("alpha0", res.alpha0[i]);
        w.field("p0", res.p0[i]);
        w.obj_close();
    }
    w.arr_close();
    w.field("maxDeviation", res.maxDeviation);
    w.field("pass", pass);
    w.obj_close();
    emit(w.str(), args.outPath);
    return pass ? 0 : 2;
}

} // namespace

// ---------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{"billiard dynamics on n-symmetric ovals"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string gridArg = "32x16";
    std::string pRangeArg = "-0.95,0.95";
    int iters = 100;
    int m = 1;
    double maxArc = 4.0;
    double phi0Arg = 0.0;
    int gutkinN = 5;
    double gutkinA1 = 0.3;
    int gutkinSeeds = 10;
    int gutkinIters = 10000;

    auto addCommon = [&](CLI::App* cmd, bool needConfig) {
        if (needConfig)
            cmd->add_option("--config", args.configPath, "curve definition file")
                ->required();
        cmd->add_option("--out", args.outPath, "output file path");
        cmd->add_option("--tolerance", args.tolArgs,
                        "override a named tolerance, NAME=VALUE");
        cmd->add_option("--workers", args.workers, "parallel worker count");
    };

    CLI::App* vcmd = app.add_subcommand("validate", "check curve admissibility");
    addCommon(vcmd, true);

    CLI::App* pcmd = app.add_subcommand("portrait", "phase portrait CSV");
    addCommon(pcmd, true);
    pcmd->add_option("--grid", gridArg, "seed grid, NxM (phi x p)");
    pcmd->add_option("--p-range", pRangeArg, "momentum window, pMin,pMax");
    pcmd->add_option("--iters", iters, "bounces per seed");

    CLI::App* fcmd = app.add_subcommand("families", "symmetric orbit families");
    addCommon(fcmd, true);

    CLI::App* tcmd = app.add_subcommand("twist", "Birkhoff twist coefficients");
    addCommon(tcmd, true);
    tcmd->add_option("--m", m, "rotation class");

    CLI::App* mcmd = app.add_subcommand("manifolds", "invariant manifolds");
    addCommon(mcmd, true);
    mcmd->add_option("--m", m, "rotation class");
    mcmd->add_option("--max-arc", maxArc, "growth arc length per branch");
    CLI::Option* phi0Opt =
        mcmd->add_option("--phi0", phi0Arg, "anchor critical angle");

    CLI::App* gcmd = app.add_subcommand("gutkin", "horizontal invariant curve");
    addCommon(gcmd, false);
    gcmd->add_option("--n", gutkinN, "symmetry order");
    gcmd->add_option("--a1", gutkinA1, "curvature-radius amplitude");
    gcmd->add_option("--seeds", gutkinSeeds, "orbit seeds");
    gcmd->add_option("--iters", gutkinIters, "bounces per seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::string command = app.get_subcommands().front()->get_name();
    try {
        if (vcmd->parsed()) return cmd_validate(args);
        if (pcmd->parsed()) return cmd_portrait(args, gridArg, pRangeArg, iters);
        if (fcmd->parsed()) return cmd_families(args);
        if (tcmd->parsed()) return cmd_twist(args, m);
        if (mcmd->parsed())
            return cmd_manifolds(args, m, maxArc, phi0Arg,
                                 phi0Opt->count() > 0);
        if (gcmd->parsed())
            return cmd_gutkin(args, gutkinN, gutkinA1, gutkinSeeds,
                              gutkinIters);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const DegenerateCircle& e) {
        return emit_analysis_error(command, "DegenerateCircle", e.what(),
                                   args.outPath);
    } catch (const GrazingOrbit& e) {
        return emit_analysis_error(command, "GrazingOrbit", e.what(),
                                   args.outPath);
    } catch (const InvalidResult& e) {
        return emit_analysis_error(command, "InvalidResult", e.what(),
                                   args.outPath);
    } catch (const Resonant& e) {
        return emit_analysis_error(command, "Resonant", e.what(), args.outPath);
    } catch (const NotElliptic& e) {
        return emit_analysis_error(command, "NotElliptic", e.what(),
                                   args.outPath);
    } catch (const NotHyperbolic& e) {
        return emit_analysis_error(command, "NotHyperbolic", e.what(),
                                   args.outPath);
    } catch (const SupportTooWide& e) {
        return emit_analysis_error(command, "SupportTooWide", e.what(),
                                   args.outPath);
    } catch (const InvalidAmplitude& e) {
        return emit_analysis_error(command, "InvalidAmplitude", e.what(),
                                   args.outPath);
    } catch (const BilliardError& e) {
        return emit_analysis_error(command, "BilliardError", e.what(),
                                   args.outPath);
    }
    return 1;
}
