//------------------------------------------------------------------------------
// vcd.cpp
// VCD writer and reader
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/vcd.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "hyperflow/errors.hpp"

namespace hyperflow {

namespace {

const std::string taint_suffix = "__taint";

std::string vcd_id(uint32_t index) {
    // Printable ASCII '!'..'~', little-endian base 94.
    std::string id;
    do {
        id += static_cast<char>('!' + index % 94);
        index /= 94;
    } while (index);
    return id;
}

std::vector<std::string> split_path(const std::string& name) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        size_t slash = name.find('/', start);
        if (slash == std::string::npos) {
            parts.push_back(name.substr(start));
            return parts;
        }
        parts.push_back(name.substr(start, slash - start));
        start = slash + 1;
    }
}

std::string trimmed_binary(const Bits& b) {
    std::string s = b.to_binary();
    size_t first = s.find('1');
    return first == std::string::npos ? "0" : s.substr(first);
}

//------------------------------------------------------------------------------
// Writer
//------------------------------------------------------------------------------

struct VarPlan {
    const SignalTrace* sig = nullptr;
    bool taint_plane = false;
    std::string id;
    std::string leaf;
};

struct ScopeNode {
    std::string name;
    std::vector<ScopeNode> children;
    std::vector<VarPlan> vars;

    ScopeNode& child(const std::string& n) {
        for (auto& c : children)
            if (c.name == n)
                return c;
        children.push_back(ScopeNode{n, {}, {}});
        return children.back();
    }
};

void emit_change(std::ostream& out, const VarPlan& v, const VertexSample& s) {
    const Bits& b = v.taint_plane ? s.val_taint : s.val;
    if (v.sig->width == 1)
        out << (b.bit(0) ? '1' : '0') << v.id << "\n";
    else
        out << 'b' << trimmed_binary(b) << ' ' << v.id << "\n";
}

void emit_scope(std::ostream& out, const ScopeNode& node, int depth) {
    std::string pad(static_cast<size_t>(depth) * 2, ' ');
    out << pad << "$scope module " << node.name << " $end\n";
    for (const auto& v : node.vars) {
        uint32_t msb = v.sig->lsb + v.sig->width - 1;
        out << pad << "  $var wire " << v.sig->width << " " << v.id << " " << v.leaf << " ["
            << msb << ":" << v.sig->lsb << "] $end\n";
    }
    for (const auto& c : node.children)
        emit_scope(out, c, depth + 1);
    out << pad << "$upscope $end\n";
}

} // namespace

void write_vcd(const Trace& trace, std::ostream& out, VcdPlane plane) {
    ScopeNode root{"", {}, {}};
    std::vector<VarPlan> all_vars;
    uint32_t next_id = 0;

    auto place = [&](const SignalTrace& sig, bool taint_plane) {
        auto parts = split_path(sig.name);
        ScopeNode* node = &root;
        if (parts.size() == 1) {
            std::string fallback = trace.design_name.empty() ? "main" : trace.design_name;
            node = &root.child(fallback);
        } else {
            for (size_t i = 0; i + 1 < parts.size(); ++i)
                node = &node->child(parts[i]);
        }
        VarPlan v;
        v.sig = &sig;
        v.taint_plane = taint_plane;
        v.id = vcd_id(next_id++);
        v.leaf = parts.back() + (taint_plane ? taint_suffix : "");
        node->vars.push_back(v);
        all_vars.push_back(v);
    };

    for (const auto& sig : trace.signals) {
        if (plane != VcdPlane::Taints)
            place(sig, false);
        if (plane != VcdPlane::Values)
            place(sig, true);
    }

    out << "$date\n  change list export\n$end\n";
    out << "$version\n  hyperflow vcd writer\n$end\n";
    out << "$timescale\n  " << trace.timescale << "\n$end\n";
    for (const auto& top : root.children)
        emit_scope(out, top, 0);
    out << "$enddefinitions $end\n";

    // Initial block: every variable's t=0 state.
    out << "#0\n$dumpvars\n";
    for (const auto& v : all_vars) {
        if (!v.sig->samples.empty() && v.sig->samples.front().t == 0) {
            emit_change(out, v, v.sig->samples.front());
        } else {
            VertexSample zero;
            zero.val = Bits(v.sig->width);
            zero.val_taint = Bits(v.sig->width);
            emit_change(out, v, zero);
        }
    }
    out << "$end\n";

    // Later changes, grouped by time; a variable appears only when its own
    // plane actually changed.
    struct Pending {
        uint64_t t;
        size_t var;
        const VertexSample* sample;
    };
    std::vector<Pending> pending;
    for (size_t vi = 0; vi < all_vars.size(); ++vi) {
        const auto& v = all_vars[vi];
        const auto& samples = v.sig->samples;
        for (size_t si = 0; si < samples.size(); ++si) {
            if (samples[si].t == 0)
                continue;
            bool changed = true;
            if (si > 0) {
                const Bits& prev = v.taint_plane ? samples[si - 1].val_taint : samples[si - 1].val;
                const Bits& cur = v.taint_plane ? samples[si].val_taint : samples[si].val;
                changed = prev != cur;
            }
            if (changed)
                pending.push_back({samples[si].t, vi, &samples[si]});
        }
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Pending& a, const Pending& b) { return a.t < b.t; });

    uint64_t cur_t = 0;
    bool have_t = false;
    for (const auto& p : pending) {
        if (!have_t || p.t != cur_t) {
            out << "#" << p.t << "\n";
            cur_t = p.t;
            have_t = true;
        }
        emit_change(out, all_vars[p.var], *p.sample);
    }
    out << "#" << trace.end_time << "\n";
}

std::string write_vcd_string(const Trace& trace, VcdPlane plane) {
    std::ostringstream out;
    write_vcd(trace, out, plane);
    return out.str();
}

//------------------------------------------------------------------------------
// Reader
//------------------------------------------------------------------------------

namespace {

struct Tok {
    std::string text;
    uint32_t line = 0;
};

struct VarInfo {
    size_t signal = 0;  // index into trace.signals
    bool taint_plane = false;
    uint32_t width = 1;
};

class VcdReader {
public:
    VcdReader(std::istream& in, std::string path) : path_(std::move(path)) {
        std::string line;
        uint32_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream ls(line);
            std::string t;
            while (ls >> t)
                toks_.push_back({t, lineno});
        }
    }

    Trace run() {
        parse_header();
        parse_changes();
        finish();
        return std::move(trace_);
    }

private:
    std::string path_;
    std::vector<Tok> toks_;
    size_t pos_ = 0;
    Trace trace_;
    std::map<std::string, VarInfo> vars_;
    std::map<std::string, size_t> signal_index_;
    std::vector<std::string> scope_;

    // Current assembled state per signal, committed into samples per timestep.
    std::vector<Bits> val_, taint_;
    std::vector<bool> touched_;
    uint64_t cur_t_ = 0;
    bool saw_time_ = false;
    uint64_t max_marker_ = 0;
    uint64_t last_change_ = 0;
    bool any_change_ = false;

    [[noreturn]] void fail(const Tok& t, const std::string& m) {
        throw VcdSyntaxError(path_, t.line, m);
    }

    bool at_end() const { return pos_ >= toks_.size(); }

    const Tok& peek() {
        if (at_end())
            throw VcdSyntaxError(path_, toks_.empty() ? 1 : toks_.back().line,
                                 "unexpected end of file");
        return toks_[pos_];
    }

    Tok take() {
        Tok t = peek();
        ++pos_;
        return t;
    }

    void skip_to_end_kw() {
        while (true) {
            Tok t = take();
            if (t.text == "$end")
                return;
        }
    }

    std::string collect_to_end_kw() {
        std::string body;
        while (true) {
            Tok t = take();
            if (t.text == "$end")
                return body;
            if (!body.empty())
                body += " ";
            body += t.text;
        }
    }

    size_t signal_slot(const std::string& name, uint32_t width, uint32_t lsb, const Tok& at) {
        auto it = signal_index_.find(name);
        if (it != signal_index_.end()) {
            const SignalTrace& s = trace_.signals[it->second];
            if (s.width != width)
                throw WidthMismatch("variable planes of `" + name + "` disagree on width",
                                    SourceSite{path_, at.line, 1});
            return it->second;
        }
        SignalTrace s;
        s.name = name;
        s.width = width;
        s.lsb = lsb;
        trace_.signals.push_back(std::move(s));
        signal_index_[name] = trace_.signals.size() - 1;
        return trace_.signals.size() - 1;
    }

    void parse_var() {
        Tok type = take();
        (void)type;  // wire/reg/logic all read the same
        Tok wtok = take();
        if (wtok.text.find_first_not_of("0123456789") != std::string::npos)
            fail(wtok, "bad $var width `" + wtok.text + "`");
        uint32_t width = static_cast<uint32_t>(std::stoul(wtok.text));
        if (width == 0 || width > 4096)
            fail(wtok, "unreasonable $var width " + wtok.text);
        Tok id = take();
        Tok ref = take();
        uint32_t lsb = 0;
        Tok next = take();
        if (next.text != "$end") {
            // `[msb:lsb]` reference range
            const std::string& r = next.text;
            size_t colon = r.find(':');
            if (r.size() < 5 || r.front() != '[' || r.back() != ']' || colon == std::string::npos)
                fail(next, "bad $var reference `" + r + "`");
            std::string msb_s = r.substr(1, colon - 1);
            std::string lsb_s = r.substr(colon + 1, r.size() - colon - 2);
            if (msb_s.empty() || lsb_s.empty() ||
                msb_s.find_first_not_of("0123456789") != std::string::npos ||
                lsb_s.find_first_not_of("0123456789") != std::string::npos)
                fail(next, "bad $var reference `" + r + "`");
            uint32_t msb = static_cast<uint32_t>(std::stoul(msb_s));
            lsb = static_cast<uint32_t>(std::stoul(lsb_s));
            if (msb < lsb || msb - lsb + 1 != width)
                throw WidthMismatch("range `" + r + "` disagrees with width " +
                                        std::to_string(width),
                                    SourceSite{path_, next.line, 1});
            Tok end = take();
            if (end.text != "$end")
                fail(end, "expected $end after $var");
        }

        std::string leaf = ref.text;
        bool taint_plane = false;
        if (leaf.size() > taint_suffix.size() &&
            leaf.compare(leaf.size() - taint_suffix.size(), taint_suffix.size(), taint_suffix) ==
                0) {
            taint_plane = true;
            leaf = leaf.substr(0, leaf.size() - taint_suffix.size());
        }
        std::string full;
        for (const auto& s : scope_)
            full += s + "/";
        full += leaf;

        if (vars_.count(id.text))
            fail(id, "variable id `" + id.text + "` declared twice");
        VarInfo info;
        info.signal = signal_slot(full, width, lsb, ref);
        info.taint_plane = taint_plane;
        info.width = width;
        vars_[id.text] = info;
    }

    void parse_header() {
        bool defs_done = false;
        while (!defs_done) {
            Tok t = take();
            if (t.text == "$date" || t.text == "$version" || t.text == "$comment") {
                skip_to_end_kw();
            } else if (t.text == "$timescale") {
                std::string body = collect_to_end_kw();
                // Accept "1ns" or "1 ns"; only magnitude 1 is representable.
                size_t i = 0;
                while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i])))
                    ++i;
                size_t d = i;
                while (d < body.size() && std::isdigit(static_cast<unsigned char>(body[d])))
                    ++d;
                if (d == i)
                    fail(t, "bad $timescale `" + body + "`");
                std::string mag = body.substr(i, d - i);
                if (mag != "1")
                    throw TimebaseMismatch("timescale magnitude `" + mag +
                                           "` is not 1; timesteps cannot be aligned");
                std::string unit;
                for (size_t k = d; k < body.size(); ++k)
                    if (!std::isspace(static_cast<unsigned char>(body[k])))
                        unit += body[k];
                trace_.timescale = mag + unit;
            } else if (t.text == "$scope") {
                Tok kind = take();
                (void)kind;
                Tok name = take();
                scope_.push_back(name.text);
                Tok end = take();
                if (end.text != "$end")
                    fail(end, "expected $end after $scope");
                if (scope_.size() == 1 && trace_.design_name.empty())
                    trace_.design_name = name.text;
            } else if (t.text == "$upscope") {
                if (scope_.empty())
                    fail(t, "$upscope without open scope");
                scope_.pop_back();
                Tok end = take();
                if (end.text != "$end")
                    fail(end, "expected $end after $upscope");
            } else if (t.text == "$var") {
                parse_var();
            } else if (t.text == "$enddefinitions") {
                Tok end = take();
                if (end.text != "$end")
                    fail(end, "expected $end after $enddefinitions");
                defs_done = true;
            } else {
                fail(t, "unexpected token `" + t.text + "` in header");
            }
        }
        val_.reserve(trace_.signals.size());
        taint_.reserve(trace_.signals.size());
        for (const auto& s : trace_.signals) {
            val_.emplace_back(s.width);
            taint_.emplace_back(s.width);
        }
        touched_.assign(trace_.signals.size(), true);  // force a t=0 sample everywhere
        cur_t_ = 0;
        saw_time_ = false;
    }

    void commit_time() {
        for (size_t i = 0; i < trace_.signals.size(); ++i) {
            if (!touched_[i])
                continue;
            auto& samples = trace_.signals[i].samples;
            if (samples.empty() || samples.back().val != val_[i] ||
                samples.back().val_taint != taint_[i])
                samples.push_back({cur_t_, val_[i], taint_[i]});
            touched_[i] = false;
        }
    }

    void apply(const Tok& at, const std::string& id, const Bits& value) {
        auto it = vars_.find(id);
        if (it == vars_.end())
            throw UnknownVcdId(path_, at.line, id);
        const VarInfo& v = it->second;
        Bits resized = value.resized(v.width);
        if (v.taint_plane)
            taint_[v.signal] = resized;
        else
            val_[v.signal] = resized;
        touched_[v.signal] = true;
        if (saw_time_ || cur_t_ > 0) {
            last_change_ = std::max(last_change_, cur_t_);
            any_change_ = true;
        }
    }

    void parse_changes() {
        while (!at_end()) {
            Tok t = take();
            const std::string& s = t.text;
            if (s[0] == '#') {
                std::string digits = s.substr(1);
                if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
                    fail(t, "bad timestamp `" + s + "`");
                uint64_t nt = std::stoull(digits);
                if (saw_time_ && nt < cur_t_)
                    fail(t, "timestamp " + digits + " goes backwards");
                if (saw_time_ || nt > 0)
                    commit_time();
                cur_t_ = nt;
                saw_time_ = true;
                max_marker_ = std::max(max_marker_, nt);
            } else if (s == "$dumpvars" || s == "$dumpall" || s == "$dumpon" ||
                       s == "$dumpoff" || s == "$end") {
                continue;
            } else if (s == "$comment") {
                skip_to_end_kw();
            } else if (s[0] == 'b' || s[0] == 'B') {
                std::string bits = s.substr(1);
                if (bits.empty())
                    fail(t, "vector change with no digits");
                for (char c : bits) {
                    if (c == 'x' || c == 'X' || c == 'z' || c == 'Z')
                        fail(t, "four-state value `" + s + "` in a two-state dump");
                    if (c != '0' && c != '1')
                        fail(t, "bad vector digit `" + std::string(1, c) + "`");
                }
                Tok id = take();
                size_t first = bits.find('1');
                std::string sig_bits = first == std::string::npos ? "0" : bits.substr(first);
                auto it = vars_.find(id.text);
                if (it == vars_.end())
                    throw UnknownVcdId(path_, id.line, id.text);
                if (sig_bits.size() > it->second.width)
                    throw WidthMismatch("value `" + s + "` is wider than variable `" + id.text +
                                            "` (" + std::to_string(it->second.width) + " bits)",
                                        SourceSite{path_, t.line, 1});
                apply(id, id.text, Bits::from_binary(sig_bits));
            } else if (s[0] == '0' || s[0] == '1') {
                if (s.size() < 2)
                    fail(t, "scalar change `" + s + "` has no id");
                apply(t, s.substr(1), Bits::from_uint(s[0] == '1' ? 1 : 0, 1));
            } else if (s[0] == 'x' || s[0] == 'X' || s[0] == 'z' || s[0] == 'Z') {
                fail(t, "four-state value `" + s + "` in a two-state dump");
            } else if (s[0] == 'r' || s[0] == 'R') {
                fail(t, "real-valued variables are not supported");
            } else {
                fail(t, "unexpected token `" + s + "` in change section");
            }
        }
        commit_time();
    }

    void finish() {
        uint64_t end = max_marker_;
        if (any_change_)
            end = std::max(end, last_change_ + 1);
        if (!saw_time_)
            end = 0;
        trace_.end_time = end;
    }
};

} // namespace

Trace read_vcd(std::istream& in, const std::string& path) {
    return VcdReader(in, path).run();
}

Trace read_vcd_string(const std::string& text, const std::string& path) {
    std::istringstream in(text);
    return read_vcd(in, path);
}

} // namespace hyperflow
