//------------------------------------------------------------------------------
// property.hpp
// Asset/boundary configuration and no-flow property generation
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <string>
#include <vector>

#include "hyperflow/elaborate.hpp"

namespace hyperflow {

enum class Objective { Confidentiality, Integrity };

std::string to_string(Objective o);

// One `boundary` line from the config; either a flat signal name or a
// `module:<prefix>` hierarchy expansion.
struct BoundaryEntry {
    std::string entry;
    SourceSite site;
};

struct AssetSpec {
    std::string asset;  // flat signal name
    Objective objective = Objective::Confidentiality;
    std::vector<BoundaryEntry> boundary;  // the asset itself is implicitly inside
    SourceSite site;
};

// A no-flow requirement: information must never move from any source to any
// sink. sources and sinks are sorted, duplicate-free, and disjoint.
struct IftProperty {
    std::string name;
    Objective objective = Objective::Confidentiality;
    std::string asset;
    std::vector<std::string> sources;
    std::vector<std::string> sinks;
    std::string text;  // human-readable "a =/=> {b, c}" form
};

// Parses the asset config format:
//
//   asset <flat signal name>
//   objective confidentiality | integrity
//   boundary <flat signal name>
//   boundary module:<hierarchy prefix>
//
// Stanzas start at each `asset` line; `#` starts a comment. Malformed input
// raises AssetConfigError citing the offending line.
std::vector<AssetSpec> parse_asset_config(const std::string& text,
                                          const std::string& path = "<config>");

// Instantiates the no-flow template for one asset. Confidentiality pins the
// asset as the lone source and everything outside the boundary as sinks;
// Integrity mirrors that. Unknown names raise UnknownSignal; a boundary that
// swallows the whole design raises EmptySinkSet.
std::vector<IftProperty> generate_ift_properties(const AssetSpec& spec,
                                                 const std::vector<Signal>& signals);

std::vector<IftProperty> generate_ift_properties(const std::vector<AssetSpec>& specs,
                                                 const std::vector<Signal>& signals);

} // namespace hyperflow
