//------------------------------------------------------------------------------
// property.cpp
// Asset config parsing and confidentiality/integrity property templates
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#include "hyperflow/property.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace hyperflow {

namespace {

std::string trimmed(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Splits "keyword rest" at the first whitespace run.
std::pair<std::string, std::string> split_directive(const std::string& line) {
    size_t sp = line.find_first_of(" \t");
    if (sp == std::string::npos)
        return {line, ""};
    return {line.substr(0, sp), trimmed(line.substr(sp))};
}

std::string brace_list(const std::vector<std::string>& names) {
    std::string out = "{";
    for (size_t i = 0; i < names.size(); ++i) {
        if (i)
            out += ", ";
        out += names[i];
    }
    out += "}";
    return out;
}

std::string flat_ident(const std::string& name) {
    std::string out = name;
    std::replace(out.begin(), out.end(), '/', '_');
    return out;
}

} // namespace

std::string to_string(Objective o) {
    return o == Objective::Confidentiality ? "confidentiality" : "integrity";
}

std::vector<AssetSpec> parse_asset_config(const std::string& text, const std::string& path) {
    std::vector<AssetSpec> specs;
    AssetSpec current;
    bool in_stanza = false;
    bool have_objective = false;

    auto site_at = [&](uint32_t line) { return SourceSite{path, line, 1}; };
    auto finish = [&](uint32_t line) {
        if (!in_stanza)
            return;
        if (!have_objective)
            throw AssetConfigError("asset `" + current.asset + "` has no objective line",
                                   site_at(line));
        specs.push_back(std::move(current));
        current = AssetSpec{};
        in_stanza = false;
        have_objective = false;
    };

    std::istringstream in(text);
    std::string raw;
    uint32_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        std::string line = trimmed(raw);
        if (line.empty())
            continue;

        auto [word, rest] = split_directive(line);
        if (word == "asset") {
            finish(lineno);
            if (rest.empty())
                throw AssetConfigError("asset line names no signal", site_at(lineno));
            if (rest.find_first_of(" \t") != std::string::npos)
                throw AssetConfigError("asset line must name exactly one signal", site_at(lineno));
            current.asset = rest;
            current.site = site_at(lineno);
            in_stanza = true;
        } else if (word == "objective") {
            if (!in_stanza)
                throw AssetConfigError("objective line outside any asset stanza", site_at(lineno));
            if (have_objective)
                throw AssetConfigError("asset `" + current.asset + "` has two objective lines", site_at(lineno));
            std::string obj = lowered(rest);
            if (obj == "confidentiality")
                current.objective = Objective::Confidentiality;
            else if (obj == "integrity")
                current.objective = Objective::Integrity;
            else
                throw AssetConfigError("objective must be `confidentiality` or `integrity`, got `" + rest + "`", site_at(lineno));
            have_objective = true;
        } else if (word == "boundary") {
            if (!in_stanza)
                throw AssetConfigError("boundary line outside any asset stanza", site_at(lineno));
            if (rest.empty())
                throw AssetConfigError("boundary line names no signal or module prefix", site_at(lineno));
            if (rest.find_first_of(" \t") != std::string::npos)
                throw AssetConfigError("boundary line must name exactly one entry", site_at(lineno));
            current.boundary.push_back({rest, site_at(lineno)});
        } else {
            throw AssetConfigError("unknown directive `" + word + "`", site_at(lineno));
        }
    }
    finish(lineno);
    if (specs.empty())
        throw AssetConfigError("config defines no assets", site_at(lineno ? lineno : 1));
    return specs;
}

std::vector<IftProperty> generate_ift_properties(const AssetSpec& spec,
                                                 const std::vector<Signal>& signals) {
    std::set<std::string> all;
    for (const auto& s : signals)
        all.insert(s.name);

    if (!all.count(spec.asset))
        throw UnknownSignal("asset `" + spec.asset + "` is not a design signal", spec.site);

    // The asset is always inside its own boundary.
    std::set<std::string> inside{spec.asset};
    for (const auto& b : spec.boundary) {
        const std::string module_tag = "module:";
        if (b.entry.rfind(module_tag, 0) == 0) {
            std::string prefix = b.entry.substr(module_tag.size()) + "/";
            bool matched = false;
            for (const auto& name : all) {
                if (name.rfind(prefix, 0) == 0) {
                    inside.insert(name);
                    matched = true;
                }
            }
            if (!matched)
                throw UnknownSignal("module prefix `" + b.entry + "` matches no signals", b.site);
        } else {
            if (!all.count(b.entry))
                throw UnknownSignal("boundary signal `" + b.entry + "` is not a design signal", b.site);
            inside.insert(b.entry);
        }
    }

    std::vector<std::string> outside;
    for (const auto& name : all)
        if (!inside.count(name))
            outside.push_back(name);
    if (outside.empty())
        throw EmptySinkSet("boundary of asset `" + spec.asset + "` covers the whole design", spec.site);

    IftProperty prop;
    prop.objective = spec.objective;
    prop.asset = spec.asset;
    if (spec.objective == Objective::Confidentiality) {
        prop.name = "conf_" + flat_ident(spec.asset);
        prop.sources = {spec.asset};
        prop.sinks = outside;
        prop.text = spec.asset + " =/=> " + brace_list(outside);
    } else {
        prop.name = "integ_" + flat_ident(spec.asset);
        prop.sources = outside;
        prop.sinks = {spec.asset};
        prop.text = brace_list(outside) + " =/=> " + spec.asset;
    }
    return {prop};
}

std::vector<IftProperty> generate_ift_properties(const std::vector<AssetSpec>& specs,
                                                 const std::vector<Signal>& signals) {
    std::vector<IftProperty> out;
    for (const auto& spec : specs)
        for (auto& p : generate_ift_properties(spec, signals))
            out.push_back(std::move(p));
    return out;
}

} // namespace hyperflow
