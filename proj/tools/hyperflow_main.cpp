//------------------------------------------------------------------------------
// hyperflow_main.cpp
// Command-line driver: build, simulate, annotate, report, export
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyperflow/annotate.hpp"
#include "hyperflow/elaborate.hpp"
#include "hyperflow/errors.hpp"
#include "hyperflow/graph.hpp"
#include "hyperflow/metrics.hpp"
#include "hyperflow/parse.hpp"
#include "hyperflow/property.hpp"
#include "hyperflow/serialize.hpp"
#include "hyperflow/sim.hpp"
#include "hyperflow/vcd.hpp"

namespace {

using namespace hyperflow;

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open `" + path + "` for reading");
    std::ostringstream os;
    os << is.rdbuf();
    if (!is.good() && !is.eof())
        throw IoError("read from `" + path + "` failed");
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open `" + path + "` for writing");
    os << text;
    os.flush();
    if (!os)
        throw IoError("write to `" + path + "` failed");
}

Design load_design(const std::vector<std::string>& rtl, const std::string& top) {
    SourceUnit unit;
    for (const auto& path : rtl)
        unit.files.emplace_back(path, read_file(path));
    unit.top_module = top;
    Ast ast = parse_rtl(unit);
    return elaborate(ast, top);
}

Trace read_vcd_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open `" + path + "` for reading");
    return read_vcd(is, path);
}

void write_vcd_file(const Trace& tr, const std::string& path, VcdPlane plane) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open `" + path + "` for writing");
    write_vcd(tr, os, plane);
    os.flush();
    if (!os)
        throw IoError("write to `" + path + "` failed");
}

std::string lifr_header(double f) {
    return "LIFR(" + std::to_string(int(std::lround(f * 100))) + "%)";
}

std::string format_rate(double r) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << r;
    return os.str();
}

void print_table(std::ostream& os, const std::vector<std::vector<std::string>>& rows) {
    std::vector<size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size())
            width.resize(row.size(), 0);
        for (size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    }
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c)
                os << "  ";
            os << std::left << std::setw(int(width[c])) << row[c];
        }
        os << "\n";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Hyperflow toolkit: hardware information-flow graphs, taint "
                 "simulation, trace annotation, and flow metrics"};
    app.require_subcommand(1);
    bool include_clocked = false;
    app.add_flag("--include-clocked", include_clocked,
                 "count clock fan-in edges in metrics and export views");

    // ---- build ----------------------------------------------------------
    auto* cb = app.add_subcommand("build", "Construct a hyperflow graph from RTL sources");
    std::vector<std::string> b_rtl;
    std::string b_top, b_out;
    cb->add_option("rtl", b_rtl, "RTL source files")->required()->check(CLI::ExistingFile);
    cb->add_option("--top", b_top, "top module name")->required();
    cb->add_option("-o,--out", b_out, "output graph file")->required();
    cb->callback([&] {
        Design design = load_design(b_rtl, b_top);
        HyperflowGraph g = build_graph(design);
        save_graph_file(g, b_out);
        std::cerr << "wrote " << b_out << ": " << g.vertices.size() << " vertices, "
                  << g.edges.size() << " edges\n";
    });

    // ---- simulate -------------------------------------------------------
    auto* cs = app.add_subcommand(
        "simulate", "Run the taint co-simulation for every generated property");
    std::vector<std::string> s_rtl;
    std::string s_top, s_assets, s_stim, s_outdir = ".";
    std::string s_mode = "conservative";
    cs->add_option("rtl", s_rtl, "RTL source files")->required()->check(CLI::ExistingFile);
    cs->add_option("--top", s_top, "top module name")->required();
    cs->add_option("--assets", s_assets, "asset config file")->required()->check(CLI::ExistingFile);
    cs->add_option("--stimulus", s_stim, "stimulus file")->required()->check(CLI::ExistingFile);
    cs->add_option("--out-dir", s_outdir, "output directory for VCD files");
    cs->add_option("--taint-mode", s_mode, "label propagation mode")
        ->check(CLI::IsMember({"conservative", "precise"}));
    cs->callback([&] {
        Design design = load_design(s_rtl, s_top);
        std::vector<AssetSpec> specs = parse_asset_config(read_file(s_assets), s_assets);
        std::vector<IftProperty> props = generate_ift_properties(specs, design.signals);
        Stimulus stim = parse_stimulus(read_file(s_stim), s_stim);
        SimOptions opts;
        opts.taint_mode = s_mode == "precise" ? TaintMode::Precise : TaintMode::Conservative;

        std::filesystem::create_directories(s_outdir);
        bool wrote_func = false;
        for (const auto& prop : props) {
            Trace tr = simulate(design, prop, stim, opts);
            if (!wrote_func) {
                std::string path = s_outdir + "/" + design.top + ".func.vcd";
                write_vcd_file(tr, path, VcdPlane::Values);
                std::cerr << "wrote " << path << "\n";
                wrote_func = true;
            }
            std::string path = s_outdir + "/" + prop.name + ".taint.vcd";
            write_vcd_file(tr, path, VcdPlane::Taints);
            auto violations = check_property(tr, prop);
            std::cerr << "wrote " << path << ": " << prop.text << ", "
                      << (violations.empty()
                              ? std::string("no sink reached")
                              : std::to_string(violations.size()) + " sink bits reached, first " +
                                    violations.front().signal + " bit " +
                                    std::to_string(violations.front().bit) + " at t=" +
                                    std::to_string(violations.front().t))
                      << "\n";
        }
    });

    // ---- annotate -------------------------------------------------------
    auto* ca = app.add_subcommand("annotate", "Merge VCD traces into a graph file");
    std::string a_graph, a_func, a_taint, a_out;
    ca->add_option("graph", a_graph, "graph file")->required()->check(CLI::ExistingFile);
    ca->add_option("--func", a_func, "functional VCD")->required()->check(CLI::ExistingFile);
    ca->add_option("--taint", a_taint, "taint VCD (omit when --func carries both planes)")
        ->check(CLI::ExistingFile);
    ca->add_option("-o,--out", a_out, "output graph file")->required();
    ca->callback([&] {
        HyperflowGraph g = load_graph_file(a_graph);
        Trace func = read_vcd_file(a_func);
        std::vector<std::string> warnings;
        if (a_taint.empty()) {
            warnings = annotate_graph(g, func);
        } else {
            Trace taint = read_vcd_file(a_taint);
            warnings = annotate_graph(g, func, taint);
        }
        for (const auto& w : warnings)
            std::cerr << "warning: " << w << "\n";
        save_graph_file(g, a_out);
        std::cerr << "wrote " << a_out << ": trace " << g.trace_id << "\n";
    });

    // ---- report ---------------------------------------------------------
    auto* cr = app.add_subcommand("report", "Compute flow metrics for asset/target pairs");
    std::string r_graph, r_asset;
    std::vector<std::string> r_targets;
    bool r_all_outputs = false;
    bool r_json = false;
    std::vector<double> r_windows{0.25, 0.5, 0.75, 1.0};
    cr->add_option("graph", r_graph, "annotated graph file")->required()->check(CLI::ExistingFile);
    cr->add_option("--asset", r_asset, "asset signal name")->required();
    auto* topt = cr->add_option("--target", r_targets, "target signal (repeatable)");
    auto* aopt = cr->add_flag("--all-outputs", r_all_outputs, "report every output port");
    topt->excludes(aopt);
    cr->add_option("--windows", r_windows, "cumulative window fractions")->delimiter(',');
    cr->add_flag("--json", r_json, "machine-readable output");
    cr->callback([&] {
        for (double f : r_windows)
            if (!(f > 0.0) || f > 1.0)
                throw CLI::ValidationError("--windows", "fractions must lie in (0, 1]");
        HyperflowGraph g = load_graph_file(r_graph);
        if (r_all_outputs) {
            for (const auto& v : g.vertices)
                if (v.dir == Direction::Output)
                    r_targets.push_back(v.name);
        }
        if (r_targets.empty())
            throw CLI::ValidationError("--target", "no targets (give --target or --all-outputs)");

        MetricsOptions mo;
        mo.include_clock_induced = include_clocked;
        mo.window_fractions = r_windows;
        std::vector<MetricReport> reports = make_reports(g, r_asset, r_targets, mo);

        if (r_json) {
            using json = nlohmann::ordered_json;
            json doc;
            doc["design"] = g.design_name;
            doc["trace_id"] = g.trace_id;
            doc["asset"] = r_asset;
            doc["include_clocked"] = include_clocked;
            doc["windows"] = r_windows;
            json rows = json::array();
            for (size_t i = 0; i < reports.size(); ++i) {
                const MetricReport& r = reports[i];
                json row;
                row["no"] = i + 1;
                row["target"] = r.target;
                row["scm"] = r.scm;
                row["scm_observed"] = r.scm_observed;
                row["pam"] = json{{"activated", r.pam.activated},
                                  {"denominator", r.pam.denominator},
                                  {"value", r.pam.value()},
                                  {"truncated", r.pam.truncated}};
                if (r.spm == spm_infinity)
                    row["spm"] = nullptr;
                else
                    row["spm"] = r.spm;
                row["spm_time"] = r.spm_time;
                json lifr_rows = json::array();
                for (const auto& e : r.lifr)
                    lifr_rows.push_back(json{
                        {"t1", e.t1}, {"t2", e.t2}, {"slbt", e.slbt}, {"rate", e.rate}});
                row["lifr"] = std::move(lifr_rows);
                row["gifr_slbt"] = r.gifr_slbt;
                row["gifr"] = r.gifr;
                rows.push_back(std::move(row));
            }
            doc["targets"] = std::move(rows);
            std::cout << doc.dump(2) << "\n";
            return;
        }

        std::cout << "design: " << g.design_name << "  trace: " << g.trace_id << "\n";
        std::cout << "asset: " << r_asset << "  gifr: " << reports.front().gifr_slbt
                  << " transitions, " << format_rate(reports.front().gifr) << "/step\n";
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> head{"No.", "target", "SCM", "PAM", "SPM"};
        for (double f : r_windows)
            head.push_back(lifr_header(f));
        rows.push_back(std::move(head));
        for (size_t i = 0; i < reports.size(); ++i) {
            const MetricReport& r = reports[i];
            std::vector<std::string> row;
            row.push_back(std::to_string(i + 1));
            row.push_back(r.target);
            row.push_back(r.scm ? "TRUE" : "FALSE");
            row.push_back(std::to_string(r.pam.activated) + "/" +
                          std::to_string(r.pam.denominator) + (r.pam.truncated ? "+" : ""));
            row.push_back(r.spm == spm_infinity ? "inf" : std::to_string(r.spm));
            for (const auto& e : r.lifr)
                row.push_back(format_rate(e.rate));
            rows.push_back(std::move(row));
        }
        print_table(std::cout, rows);
    });

    // ---- export ---------------------------------------------------------
    auto* ce = app.add_subcommand("export", "Render a graph file for visualization tools");
    std::string e_graph, e_format = "dot", e_out;
    bool e_explicit = false, e_implicit = false;
    std::vector<std::string> e_path;
    ce->add_option("graph", e_graph, "graph file")->required()->check(CLI::ExistingFile);
    ce->add_option("--format", e_format, "output format")
        ->check(CLI::IsMember({"dot", "elements"}));
    ce->add_option("-o,--out", e_out, "output file (stdout when omitted)");
    auto* eopt = ce->add_flag("--explicit-only", e_explicit, "drop implicit edges");
    auto* iopt = ce->add_flag("--implicit-only", e_implicit, "drop explicit edges");
    eopt->excludes(iopt);
    ce->add_option("--path", e_path, "restrict to activated paths: tail head")
        ->expected(2);
    ce->callback([&] {
        HyperflowGraph g = load_graph_file(e_graph);
        ExportOptions opts;
        opts.include_clock_induced = include_clocked;
        if (e_explicit)
            opts.filter = EdgeFilter::ExplicitOnly;
        if (e_implicit)
            opts.filter = EdgeFilter::ImplicitOnly;
        if (!e_path.empty()) {
            opts.path_from = e_path[0];
            opts.path_to = e_path[1];
        }
        std::string out =
            e_format == "dot" ? export_dot(g, opts) : export_elements(g, opts);
        if (e_out.empty())
            std::cout << out;
        else
            write_file(e_out, out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : int(ErrorCode::Usage);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const hyperflow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return int(hyperflow::ErrorCode::Internal);
    }
}
