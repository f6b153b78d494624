//------------------------------------------------------------------------------
// serialize.cpp
// hfg text persistence and the dot / element-list export views
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/serialize.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "hyperflow/errors.hpp"
#include "hyperflow/metrics.hpp"
#include "hyperflow/parse.hpp"

namespace hyperflow {

namespace {

// Tokens live in whitespace-split lines, so the writer percent-escapes the
// few characters that would break the framing. "-" stands for the empty
// token; a literal "-" escapes to "%2D".
std::string escape_token(const std::string& s) {
    if (s.empty())
        return "-";
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '%': out += "%25"; break;
        case ' ': out += "%20"; break;
        case '\t': out += "%09"; break;
        case '\n': out += "%0A"; break;
        case '\r': out += "%0D"; break;
        case '-':
            if (s.size() == 1) {
                out += "%2D";
                break;
            }
            out += c;
            break;
        default: out += c; break;
        }
    }
    return out;
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::string unescape_token(const std::string& s, const std::string& path, uint32_t line) {
    if (s == "-")
        return "";
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '%') {
            out += s[i];
            continue;
        }
        if (i + 2 >= s.size())
            throw GraphFormatError(path, line, "truncated escape in `" + s + "`");
        int hi = hex_digit(s[i + 1]);
        int lo = hex_digit(s[i + 2]);
        if (hi < 0 || lo < 0)
            throw GraphFormatError(path, line, "bad escape in `" + s + "`");
        out += char(hi * 16 + lo);
        i += 2;
    }
    return out;
}

std::string site_token(const SourceSite& site) {
    return escape_token(site.file) + ":" + std::to_string(site.line) + ":" +
           std::to_string(site.col);
}

uint64_t parse_u64(const std::string& tok, const std::string& path, uint32_t line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw GraphFormatError(path, line, "expected a number, got `" + tok + "`");
    try {
        return std::stoull(tok);
    } catch (const std::exception&) {
        throw GraphFormatError(path, line, "number `" + tok + "` does not fit in 64 bits");
    }
}

uint32_t parse_u32(const std::string& tok, const std::string& path, uint32_t line) {
    uint64_t v = parse_u64(tok, path, line);
    if (v > UINT32_MAX)
        throw GraphFormatError(path, line, "number `" + tok + "` does not fit in 32 bits");
    return uint32_t(v);
}

SourceSite parse_site(const std::string& tok, const std::string& path, uint32_t line) {
    size_t c2 = tok.rfind(':');
    size_t c1 = c2 == std::string::npos ? std::string::npos : tok.rfind(':', c2 - 1);
    if (c1 == std::string::npos || c2 == 0)
        throw GraphFormatError(path, line, "bad site token `" + tok + "`");
    SourceSite site;
    site.file = unescape_token(tok.substr(0, c1), path, line);
    site.line = parse_u32(tok.substr(c1 + 1, c2 - c1 - 1), path, line);
    site.col = parse_u32(tok.substr(c2 + 1), path, line);
    return site;
}

Bits parse_bits(const std::string& tok, uint32_t width, const std::string& path, uint32_t line) {
    if (tok.size() != width || tok.find_first_not_of("01") != std::string::npos)
        throw GraphFormatError(path, line,
                               "expected " + std::to_string(width) + " binary digits, got `" +
                                   tok + "`");
    return Bits::from_binary(tok);
}

const char* dir_code(Direction d) {
    switch (d) {
    case Direction::Input: return "i";
    case Direction::Output: return "o";
    default: return "n";
    }
}

} // namespace

void save_graph(const HyperflowGraph& g, std::ostream& os) {
    os << "hfg 1\n";
    os << "design " << escape_token(g.design_name) << "\n";
    os << "trace " << g.trace_end << " " << escape_token(g.trace_id) << "\n";
    for (const auto& v : g.vertices) {
        os << "v " << escape_token(v.name) << " " << v.width << " " << v.lsb << " "
           << dir_code(v.dir) << " " << (v.is_clock ? 1 : 0) << "\n";
    }
    for (size_t vi = 0; vi < g.vertices.size(); ++vi) {
        for (const auto& s : g.vertices[vi].samples) {
            os << "s " << vi << " " << s.t << " " << s.val.to_binary() << " "
               << s.val_taint.to_binary() << "\n";
        }
    }
    for (const auto& e : g.edges) {
        os << "e " << e.tail << " " << e.head << " "
           << (e.kind == FlowKind::Explicit ? "x" : "i") << " "
           << (e.timing == EdgeTiming::Continuous ? "c" : "k") << " "
           << (e.clock_induced ? 1 : 0) << " " << escape_token(e.clock) << " " << e.bit_lo << " "
           << e.bit_hi << " " << site_token(e.site) << " " << e.predicate.terms.size();
        for (size_t i = 0; i < e.predicate.terms.size(); ++i) {
            os << (i == 0 ? " " : " ;; ");
            os << print_expr(*e.predicate.terms[i]);
        }
        os << "\n";
    }
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
        for (const auto& w : g.edges[ei].windows) {
            os << "w " << ei << " " << w.t_start << " " << w.t_end << " " << (w.open ? 1 : 0)
               << "\n";
        }
    }
}

std::string save_graph_string(const HyperflowGraph& g) {
    std::ostringstream os;
    save_graph(g, os);
    return os.str();
}

void save_graph_file(const HyperflowGraph& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open `" + path + "` for writing");
    save_graph(g, os);
    os.flush();
    if (!os)
        throw IoError("write to `" + path + "` failed");
}

HyperflowGraph load_graph(std::istream& is, const std::string& path) {
    HyperflowGraph g;
    std::string raw;
    uint32_t lineno = 0;
    bool saw_header = false;
    bool saw_design = false;

    auto split = [](const std::string& line) {
        std::vector<std::string> toks;
        size_t i = 0;
        while (i < line.size()) {
            size_t j = line.find(' ', i);
            if (j == std::string::npos)
                j = line.size();
            if (j > i)
                toks.push_back(line.substr(i, j - i));
            i = j + 1;
        }
        return toks;
    };

    while (std::getline(is, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        if (raw.empty())
            continue;
        if (!saw_header) {
            if (raw != "hfg 1")
                throw GraphFormatError(path, lineno, "expected `hfg 1` header, got `" + raw + "`");
            saw_header = true;
            continue;
        }
        std::vector<std::string> t = split(raw);
        const std::string& tag = t[0];
        if (tag == "design") {
            if (t.size() != 2)
                throw GraphFormatError(path, lineno, "design line wants 1 field");
            g.design_name = unescape_token(t[1], path, lineno);
            saw_design = true;
        } else if (tag == "trace") {
            if (t.size() != 3)
                throw GraphFormatError(path, lineno, "trace line wants 2 fields");
            g.trace_end = parse_u64(t[1], path, lineno);
            g.trace_id = unescape_token(t[2], path, lineno);
        } else if (tag == "v") {
            if (t.size() != 6)
                throw GraphFormatError(path, lineno, "vertex line wants 5 fields");
            Vertex v;
            v.name = unescape_token(t[1], path, lineno);
            v.width = parse_u32(t[2], path, lineno);
            if (v.width == 0)
                throw GraphFormatError(path, lineno, "vertex width must be positive");
            v.lsb = parse_u32(t[3], path, lineno);
            if (t[4] == "i")
                v.dir = Direction::Input;
            else if (t[4] == "o")
                v.dir = Direction::Output;
            else if (t[4] == "n")
                v.dir = Direction::Internal;
            else
                throw GraphFormatError(path, lineno, "bad direction `" + t[4] + "`");
            if (t[5] != "0" && t[5] != "1")
                throw GraphFormatError(path, lineno, "bad clock flag `" + t[5] + "`");
            v.is_clock = t[5] == "1";
            g.vertices.push_back(std::move(v));
        } else if (tag == "s") {
            if (t.size() != 5)
                throw GraphFormatError(path, lineno, "sample line wants 4 fields");
            uint32_t vi = parse_u32(t[1], path, lineno);
            if (vi >= g.vertices.size())
                throw GraphFormatError(path, lineno, "sample names vertex " + t[1] +
                                                         " but only " +
                                                         std::to_string(g.vertices.size()) +
                                                         " are declared");
            Vertex& v = g.vertices[vi];
            VertexSample s;
            s.t = parse_u64(t[2], path, lineno);
            s.val = parse_bits(t[3], v.width, path, lineno);
            s.val_taint = parse_bits(t[4], v.width, path, lineno);
            if (!v.samples.empty() && v.samples.back().t >= s.t)
                throw GraphFormatError(path, lineno, "samples of `" + v.name +
                                                         "` are not time-ascending");
            v.samples.push_back(std::move(s));
        } else if (tag == "e") {
            if (t.size() < 11)
                throw GraphFormatError(path, lineno, "edge line wants at least 10 fields");
            Edge e;
            e.tail = parse_u32(t[1], path, lineno);
            e.head = parse_u32(t[2], path, lineno);
            if (e.tail >= g.vertices.size() || e.head >= g.vertices.size())
                throw GraphFormatError(path, lineno, "edge endpoint out of range");
            if (t[3] == "x")
                e.kind = FlowKind::Explicit;
            else if (t[3] == "i")
                e.kind = FlowKind::Implicit;
            else
                throw GraphFormatError(path, lineno, "bad edge kind `" + t[3] + "`");
            if (t[4] == "c")
                e.timing = EdgeTiming::Continuous;
            else if (t[4] == "k")
                e.timing = EdgeTiming::Clocked;
            else
                throw GraphFormatError(path, lineno, "bad edge timing `" + t[4] + "`");
            if (t[5] != "0" && t[5] != "1")
                throw GraphFormatError(path, lineno, "bad clock-induced flag `" + t[5] + "`");
            e.clock_induced = t[5] == "1";
            e.clock = unescape_token(t[6], path, lineno);
            e.bit_lo = parse_u32(t[7], path, lineno);
            e.bit_hi = parse_u32(t[8], path, lineno);
            e.site = parse_site(t[9], path, lineno);
            uint32_t nterms = parse_u32(t[10], path, lineno);
            if (nterms > 0) {
                // The predicate occupies the raw tail of the line, terms
                // joined with " ;; ". Recover it past the 10th space.
                size_t pos = 0;
                for (int field = 0; field < 11; ++field)
                    pos = raw.find(' ', pos) + 1;
                std::string blob = raw.substr(pos);
                size_t start = 0;
                std::vector<std::string> terms;
                while (true) {
                    size_t sep = blob.find(" ;; ", start);
                    if (sep == std::string::npos) {
                        terms.push_back(blob.substr(start));
                        break;
                    }
                    terms.push_back(blob.substr(start, sep - start));
                    start = sep + 4;
                }
                if (terms.size() != nterms)
                    throw GraphFormatError(path, lineno,
                                           "edge announces " + std::to_string(nterms) +
                                               " predicate terms but carries " +
                                               std::to_string(terms.size()));
                for (const auto& term : terms) {
                    try {
                        e.predicate.terms.push_back(parse_expression(term));
                    } catch (const Error& err) {
                        throw GraphFormatError(path, lineno,
                                               "bad predicate term `" + term + "`: " + err.what());
                    }
                }
            }
            g.edges.push_back(std::move(e));
        } else if (tag == "w") {
            if (t.size() != 5)
                throw GraphFormatError(path, lineno, "window line wants 4 fields");
            uint32_t ei = parse_u32(t[1], path, lineno);
            if (ei >= g.edges.size())
                throw GraphFormatError(path, lineno, "window names edge " + t[1] + " but only " +
                                                         std::to_string(g.edges.size()) +
                                                         " are declared");
            Window w;
            w.t_start = parse_u64(t[2], path, lineno);
            w.t_end = parse_u64(t[3], path, lineno);
            if (t[4] != "0" && t[4] != "1")
                throw GraphFormatError(path, lineno, "bad open flag `" + t[4] + "`");
            w.open = t[4] == "1";
            g.edges[ei].windows.push_back(w);
        } else {
            throw GraphFormatError(path, lineno, "unknown record `" + tag + "`");
        }
    }
    if (!saw_header)
        throw GraphFormatError(path, lineno ? lineno : 1, "missing `hfg 1` header");
    if (!saw_design)
        throw GraphFormatError(path, lineno ? lineno : 1, "missing design line");
    g.rebuild_index();
    return g;
}

HyperflowGraph load_graph_string(const std::string& text) {
    std::istringstream is(text);
    return load_graph(is);
}

HyperflowGraph load_graph_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open `" + path + "` for reading");
    return load_graph(is, path);
}

namespace {

struct ViewSet {
    std::vector<bool> v_in;
    std::vector<bool> e_in;
};

bool keep_edge(const Edge& e, const ExportOptions& opts) {
    if (e.clock_induced && !opts.include_clock_induced)
        return false;
    if (opts.filter == EdgeFilter::ExplicitOnly && e.kind != FlowKind::Explicit)
        return false;
    if (opts.filter == EdgeFilter::ImplicitOnly && e.kind != FlowKind::Implicit)
        return false;
    return true;
}

ViewSet select_view(const HyperflowGraph& g, const ExportOptions& opts) {
    ViewSet vs;
    vs.v_in.assign(g.vertices.size(), true);
    vs.e_in.assign(g.edges.size(), false);
    for (size_t i = 0; i < g.edges.size(); ++i)
        vs.e_in[i] = keep_edge(g.edges[i], opts);

    if (!opts.path_from.empty() && !opts.path_to.empty()) {
        MetricsOptions mo;
        mo.include_clock_induced = opts.include_clock_induced;
        PathSet ps = activated_paths(g, opts.path_from, opts.path_to, mo);
        vs.v_in.assign(g.vertices.size(), false);
        std::vector<std::vector<bool>> pair_in(g.vertices.size());
        for (const auto& path : ps.paths) {
            for (uint32_t v : path)
                vs.v_in[v] = true;
            for (size_t i = 0; i + 1 < path.size(); ++i) {
                auto& row = pair_in[path[i]];
                if (row.empty())
                    row.assign(g.vertices.size(), false);
                row[path[i + 1]] = true;
            }
        }
        for (size_t i = 0; i < g.edges.size(); ++i) {
            if (!vs.e_in[i])
                continue;
            const auto& row = pair_in[g.edges[i].tail];
            vs.e_in[i] = !row.empty() && row[g.edges[i].head];
        }
    }
    return vs;
}

bool taint_touched(const Vertex& v) {
    for (const auto& s : v.samples)
        if (s.val_taint.any())
            return true;
    return false;
}

} // namespace

std::string export_dot(const HyperflowGraph& g, const ExportOptions& opts) {
    ViewSet vs = select_view(g, opts);
    std::ostringstream os;
    os << "digraph \"" << g.design_name << "\" {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=ellipse, fontname=\"Helvetica\"];\n";
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        if (!vs.v_in[i])
            continue;
        os << "  \"" << g.vertices[i].name << "\"";
        if (taint_touched(g.vertices[i]))
            os << " [style=filled, fillcolor=\"#f6c4c4\"]";
        os << ";\n";
    }
    for (size_t i = 0; i < g.edges.size(); ++i) {
        if (!vs.e_in[i])
            continue;
        const Edge& e = g.edges[i];
        os << "  \"" << g.vertices[e.tail].name << "\" -> \"" << g.vertices[e.head].name
           << "\" [style=" << (e.kind == FlowKind::Explicit ? "solid" : "dashed") << "];\n";
    }
    os << "}\n";
    return os.str();
}

std::string export_elements(const HyperflowGraph& g, const ExportOptions& opts) {
    using json = nlohmann::ordered_json;
    ViewSet vs = select_view(g, opts);

    json doc;
    doc["format"] = "hyperflow-elements";
    doc["version"] = 1;
    doc["design"] = g.design_name;
    doc["trace"] = json{{"end", g.trace_end}, {"id", g.trace_id}};

    json nodes = json::array();
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        if (!vs.v_in[i])
            continue;
        const Vertex& v = g.vertices[i];
        json data;
        data["id"] = v.name;
        data["width"] = v.width;
        data["lsb"] = v.lsb;
        data["dir"] = v.dir == Direction::Input    ? "input"
                      : v.dir == Direction::Output ? "output"
                                                   : "internal";
        data["is_clock"] = v.is_clock;
        data["taint_touched"] = taint_touched(v);
        nodes.push_back(json{{"data", std::move(data)}});
    }
    json edges = json::array();
    for (size_t i = 0; i < g.edges.size(); ++i) {
        if (!vs.e_in[i])
            continue;
        const Edge& e = g.edges[i];
        json data;
        data["id"] = "e" + std::to_string(i);
        data["source"] = g.vertices[e.tail].name;
        data["target"] = g.vertices[e.head].name;
        data["kind"] = e.kind == FlowKind::Explicit ? "explicit" : "implicit";
        data["timing"] = e.timing == EdgeTiming::Continuous ? "continuous" : "clocked";
        data["clock_induced"] = e.clock_induced;
        if (!e.clock.empty())
            data["clock"] = e.clock;
        data["predicate"] = e.predicate.str();
        data["bit_lo"] = e.bit_lo;
        data["bit_hi"] = e.bit_hi;
        data["windows"] = e.windows.size();
        data["site"] = e.site.str();
        edges.push_back(json{{"data", std::move(data)}});
    }
    doc["elements"] = json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
    return doc.dump(2) + "\n";
}

} // namespace hyperflow
