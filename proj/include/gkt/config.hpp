#pragma once

#include <iosfwd>
#include <string>

#include "gkt/geometry.hpp"
#include "gkt/grid.hpp"

namespace gkt {

/// Rig, grid and kernel parameters parsed from one text config document.
struct SceneConfig {
    CameraRig rig;
    BevGridSpec grid;
    KernelSpec kernel;
};

// Text format: `key = value` lines grouped under [grid], [kernel] and
// repeated [camera] sections; `scale_strides` sits above the first section.
// `#` starts a comment. Parse errors report the line number and field.
SceneConfig parse_scene_config(std::istream& in, const std::string& source_name = "<stream>");
SceneConfig load_scene_config(const std::string& path);

void write_scene_config(const SceneConfig& config, std::ostream& out);
void save_scene_config(const SceneConfig& config, const std::string& path);

} // namespace gkt
