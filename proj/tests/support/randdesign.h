//------------------------------------------------------------------------------
// randdesign.h
// Correct-by-construction random micro-design and stimulus generator.
// Designs stay small (at most 6 signals, 4 bits each) with a single driver
// per signal and no combinational cycles.
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rng.h"

namespace testsupport {

struct RandDesign {
    std::string name;
    std::string rtl;
    std::string stimulus;
    std::vector<std::string> inputs;  // flat names, clock excluded
    std::string clock;                // flat name, empty if the design is pure comb
    uint64_t duration = 0;
};

namespace detail {

struct SigInfo {
    std::string name;
    uint32_t width;
    uint32_t lsb;
    bool is_input;
    bool clocked;  // driven from a posedge process
};

class Gen {
  public:
    Gen(Rng& rng, uint64_t tag) : rng_(rng), tag_(tag) {}

    RandDesign run() {
        RandDesign out;
        std::string mod = "r" + std::to_string(tag_);
        out.name = mod;

        uint32_t total = static_cast<uint32_t>(rng_.range(2, 6));
        uint32_t nin = static_cast<uint32_t>(rng_.range(1, std::min<uint32_t>(3, total - 1)));
        bool want_clock = total - nin >= 1 && rng_.chance(60);
        if (want_clock && nin + 1 >= total)
            want_clock = total - (nin + 1) >= 1;

        uint32_t idx = 0;
        if (want_clock)
            sigs_.push_back({"clk", 1, 0, true, false}), ++idx;
        for (uint32_t i = 0; i < nin; ++i, ++idx)
            sigs_.push_back({"s" + std::to_string(idx), static_cast<uint32_t>(rng_.range(1, 4)),
                             rng_.chance(10) ? static_cast<uint32_t>(rng_.range(1, 2)) : 0, true,
                             false});
        uint32_t ndrv = total - idx;
        for (uint32_t i = 0; i < ndrv; ++i, ++idx)
            sigs_.push_back({"s" + std::to_string(idx), static_cast<uint32_t>(rng_.range(1, 4)),
                             rng_.chance(10) ? static_cast<uint32_t>(rng_.range(1, 2)) : 0, false,
                             rng_.chance(want_clock ? 45 : 0)});

        // Ports: clock and inputs, plus the last driven signal as an output.
        std::string ports;
        for (const auto& s : sigs_)
            if (s.is_input)
                ports += (ports.empty() ? "" : ", ") + std::string("input logic ") + range_text(s) +
                         s.name;
        ports += ", output logic " + range_text(sigs_.back()) + sigs_.back().name;

        std::string body;
        for (size_t i = 0; i < sigs_.size(); ++i) {
            if (sigs_[i].is_input || i + 1 == sigs_.size())
                continue;
            body += "  logic " + range_text(sigs_[i]) + sigs_[i].name + ";\n";
        }

        for (size_t i = 0; i < sigs_.size(); ++i) {
            if (sigs_[i].is_input)
                continue;
            body += driver_text(i);
        }

        out.rtl = "module " + mod + "(" + ports + ");\n" + body + "endmodule\n";

        // Stimulus: drive every data input at t=0, then scattered updates.
        out.duration = rng_.range(8, 64);
        std::string stim;
        if (want_clock) {
            uint64_t period = rng_.chance(70) ? 2 : 4;
            stim += "clock " + mod + "/clk period " + std::to_string(period) + "\n";
            out.clock = mod + "/clk";
        }
        for (const auto& s : sigs_) {
            if (!s.is_input || s.name == "clk")
                continue;
            out.inputs.push_back(mod + "/" + s.name);
            stim += drive_line(mod, s, 0);
            uint64_t extra = rng_.range(1, 5);
            for (uint64_t k = 0; k < extra; ++k)
                stim += drive_line(mod, s, rng_.below(out.duration));
        }
        stim += "run " + std::to_string(out.duration) + "\n";
        out.stimulus = stim;
        return out;
    }

  private:
    Rng& rng_;
    uint64_t tag_;
    std::vector<SigInfo> sigs_;

    static std::string range_text(const SigInfo& s) {
        if (s.width == 1 && s.lsb == 0)
            return "";
        return "[" + std::to_string(s.lsb + s.width - 1) + ":" + std::to_string(s.lsb) + "] ";
    }

    std::string drive_line(const std::string& mod, const SigInfo& s, uint64_t t) {
        uint64_t v = rng_.below(uint64_t(1) << s.width);
        return "at " + std::to_string(t) + " drive " + mod + "/" + s.name + " = " +
               std::to_string(v) + "\n";
    }

    // Signals a driver for sigs_[i] may read: inputs, clocked signals, and
    // combinationally driven signals that appear earlier in declaration
    // order.  Clocked drivers may read anything.
    std::vector<size_t> readable(size_t i) const {
        std::vector<size_t> r;
        for (size_t j = 0; j < sigs_.size(); ++j) {
            if (j == i && !sigs_[i].clocked)
                continue;
            if (sigs_[j].name == "clk")
                continue;
            if (sigs_[i].clocked || sigs_[j].is_input || sigs_[j].clocked ||
                (!sigs_[j].is_input && j < i))
                r.push_back(j);
        }
        return r;
    }

    std::string lit(uint32_t width) {
        return std::to_string(width) + "'d" + std::to_string(rng_.below(uint64_t(1) << width));
    }

    std::string operand(const std::vector<size_t>& reads, int depth) {
        if (reads.empty() || rng_.chance(20))
            return lit(static_cast<uint32_t>(rng_.range(1, 4)));
        const SigInfo& s = sigs_[reads[rng_.below(reads.size())]];
        if (s.width > 1 && rng_.chance(25)) {
            uint32_t lo = s.lsb + static_cast<uint32_t>(rng_.below(s.width));
            uint32_t hi = lo + static_cast<uint32_t>(rng_.below(s.lsb + s.width - lo));
            if (rng_.chance(40))
                return s.name + "[" + std::to_string(hi) + "]";
            return s.name + "[" + std::to_string(hi) + ":" + std::to_string(lo) + "]";
        }
        return s.name;
    }

    std::string expr(const std::vector<size_t>& reads, int depth) {
        if (depth <= 0 || rng_.chance(30))
            return operand(reads, depth);
        switch (rng_.below(12)) {
        case 0:
            return "(" + expr(reads, depth - 1) + " & " + expr(reads, depth - 1) + ")";
        case 1:
            return "(" + expr(reads, depth - 1) + " | " + expr(reads, depth - 1) + ")";
        case 2:
            return "(" + expr(reads, depth - 1) + " ^ " + expr(reads, depth - 1) + ")";
        case 3:
            return "(" + expr(reads, depth - 1) + " + " + expr(reads, depth - 1) + ")";
        case 4:
            return "(" + expr(reads, depth - 1) + " - " + expr(reads, depth - 1) + ")";
        case 5: {
            const char* ops[] = {"==", "!=", "<", "<=", ">", ">="};
            return "(" + expr(reads, depth - 1) + " " + ops[rng_.below(6)] + " " +
                   expr(reads, depth - 1) + ")";
        }
        case 6:
            return "(" + expr(reads, depth - 1) +
                   (rng_.chance(50) ? " << " : " >> ") + std::to_string(rng_.below(4)) + ")";
        case 7:
            return "(" + expr(reads, depth - 1) +
                   (rng_.chance(50) ? " && " : " || ") + expr(reads, depth - 1) + ")";
        case 8:
            return std::string(rng_.chance(50) ? "(~" : "(!") + expr(reads, depth - 1) + ")";
        case 9: {
            const char* red[] = {"&", "|", "^"};
            return "(" + std::string(red[rng_.below(3)]) + operand(reads, depth) + ")";
        }
        case 10:
            return "{" + operand(reads, depth) + ", " + operand(reads, depth) + "}";
        default:
            return "(" + expr(reads, depth - 1) + " ? " + expr(reads, depth - 1) + " : " +
                   expr(reads, depth - 1) + ")";
        }
    }

    std::string assign_stmt(size_t i, const std::vector<size_t>& reads, bool nba,
                            const std::string& indent) {
        const SigInfo& s = sigs_[i];
        std::string lhs = s.name;
        if (s.width > 1 && rng_.chance(20)) {
            uint32_t lo = s.lsb + static_cast<uint32_t>(rng_.below(s.width));
            uint32_t hi = lo + static_cast<uint32_t>(rng_.below(s.lsb + s.width - lo));
            lhs += "[" + std::to_string(hi) + ":" + std::to_string(lo) + "]";
        }
        return indent + lhs + (nba ? " <= " : " = ") + expr(reads, 2) + ";\n";
    }

    std::string stmt(size_t i, const std::vector<size_t>& reads, bool nba,
                     const std::string& indent, int depth) {
        uint64_t pick = rng_.below(depth > 0 ? 4u : 2u);
        if (pick <= 1)
            return assign_stmt(i, reads, nba, indent);
        if (pick == 2) {
            std::string s = indent + "if (" + expr(reads, 1) + ") begin\n";
            s += stmt(i, reads, nba, indent + "  ", depth - 1);
            s += indent + "end\n";
            if (rng_.chance(60)) {
                s += indent + "else begin\n";
                s += stmt(i, reads, nba, indent + "  ", depth - 1);
                s += indent + "end\n";
            }
            return s;
        }
        std::string sel = operand(reads, 0);
        std::string s = indent + "case (" + sel + ")\n";
        uint32_t arms = static_cast<uint32_t>(rng_.range(1, 3));
        for (uint32_t a = 0; a < arms; ++a)
            s += indent + "  " + std::to_string(2) + "'d" + std::to_string(a) + ": " +
                 assign_stmt(i, reads, nba, "");
        if (rng_.chance(70))
            s += indent + "  default: " + assign_stmt(i, reads, nba, "");
        s += indent + "endcase\n";
        return s;
    }

    std::string driver_text(size_t i) {
        auto reads = readable(i);
        const SigInfo& s = sigs_[i];
        if (s.clocked) {
            std::string body = stmt(i, reads, true, "    ", 1);
            return "  always @(posedge clk) begin\n" + body + "  end\n";
        }
        if (rng_.chance(50))
            return "  assign " + s.name + " = " + expr(reads, 2) + ";\n";
        std::string body;
        body += "    " + s.name + " = " + lit(s.width) + ";\n";
        body += stmt(i, reads, false, "    ", 1);
        return "  always @(*) begin\n" + body + "  end\n";
    }
};

} // namespace detail

inline RandDesign random_design(Rng& rng, uint64_t tag) {
    return detail::Gen(rng, tag).run();
}

} // namespace testsupport
