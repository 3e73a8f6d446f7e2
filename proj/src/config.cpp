#include "gkt/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gkt/error.hpp"

namespace gkt {

namespace {

struct ParseCursor {
    std::string source;
    int line = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw Error(ErrorKind::Config,
                    source + ":" + std::to_string(line) + ": " + message);
    }
};

std::string trim(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_numbers(const ParseCursor& at, const std::string& key,
                                  const std::string& value, size_t expected) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string token;
    while (in >> token) {
        try {
            size_t used = 0;
            out.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            at.fail("field '" + key + "': '" + token + "' is not a number");
        }
    }
    if (expected != 0 && out.size() != expected) {
        at.fail("field '" + key + "': expected " + std::to_string(expected) + " numbers, got " +
                std::to_string(out.size()));
    }
    return out;
}

double parse_one(const ParseCursor& at, const std::string& key, const std::string& value) {
    return parse_numbers(at, key, value, 1)[0];
}

int parse_int(const ParseCursor& at, const std::string& key, const std::string& value) {
    double v = parse_one(at, key, value);
    if (v != std::floor(v)) at.fail("field '" + key + "' must be an integer");
    return static_cast<int>(v);
}

struct SectionState {
    std::string name; // "", "grid", "kernel" or "camera"
    int start_line = 0;
    std::map<std::string, bool> seen;
    CameraView camera;
    bool camera_has_extrinsics = false;
};

} // namespace

SceneConfig parse_scene_config(std::istream& in, const std::string& source_name) {
    SceneConfig config;
    bool saw_strides = false;
    bool saw_grid = false;
    bool saw_kernel = false;
    config.kernel = KernelSpec{}; // 3x3 full unless the file says otherwise

    ParseCursor at{source_name, 0};
    SectionState section;

    auto finish_camera = [&](const SectionState& s) {
        ParseCursor end_at{source_name, s.start_line};
        if (s.camera.name.empty()) end_at.fail("camera section is missing 'name'");
        for (const char* key : {"fx", "fy", "cx", "cy", "extrinsics", "image_size"}) {
            if (!s.seen.count(key)) {
                end_at.fail("camera '" + s.camera.name + "' is missing field '" + key + "'");
            }
        }
        config.rig.views.push_back(s.camera);
    };

    std::string raw;
    while (std::getline(in, raw)) {
        ++at.line;
        std::string line = raw;
        size_t comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') at.fail("unterminated section header");
            if (section.name == "camera") finish_camera(section);
            section = SectionState{};
            section.name = trim(line.substr(1, line.size() - 2));
            section.start_line = at.line;
            if (section.name == "grid") {
                if (saw_grid) at.fail("duplicate [grid] section");
                saw_grid = true;
            } else if (section.name == "kernel") {
                if (saw_kernel) at.fail("duplicate [kernel] section");
                saw_kernel = true;
            } else if (section.name != "camera") {
                at.fail("unknown section [" + section.name + "]");
            }
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos) at.fail("expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) at.fail("empty key");
        if (section.seen.count(key)) at.fail("duplicate field '" + key + "'");
        section.seen[key] = true;

        if (section.name.empty()) {
            if (key == "scale_strides") {
                std::vector<double> numbers = parse_numbers(at, key, value, 0);
                if (numbers.empty()) at.fail("scale_strides needs at least one stride");
                for (double n : numbers) {
                    if (n != std::floor(n) || n < 1) {
                        at.fail("scale_strides entries must be positive integers");
                    }
                    config.rig.scale_strides.push_back(static_cast<int>(n));
                }
                saw_strides = true;
            } else {
                at.fail("unknown top-level field '" + key + "'");
            }
        } else if (section.name == "grid") {
            if (key == "rows") config.grid.rows = parse_int(at, key, value);
            else if (key == "cols") config.grid.cols = parse_int(at, key, value);
            else if (key == "x_min") config.grid.x_min = parse_one(at, key, value);
            else if (key == "x_max") config.grid.x_max = parse_one(at, key, value);
            else if (key == "y_min") config.grid.y_min = parse_one(at, key, value);
            else if (key == "y_max") config.grid.y_max = parse_one(at, key, value);
            else if (key == "height_z") config.grid.height_z = parse_one(at, key, value);
            else at.fail("unknown grid field '" + key + "'");
        } else if (section.name == "kernel") {
            if (key == "k_h") config.kernel.k_h = parse_int(at, key, value);
            else if (key == "k_w") config.kernel.k_w = parse_int(at, key, value);
            else if (key == "dilation") config.kernel.dilation = parse_int(at, key, value);
            else if (key == "layout") {
                try {
                    config.kernel.layout = kernel_layout_from_string(value);
                } catch (const Error& e) {
                    at.fail(e.what());
                }
            } else at.fail("unknown kernel field '" + key + "'");
        } else { // camera
            if (key == "name") section.camera.name = value;
            else if (key == "fx") section.camera.intrinsics.fx = parse_one(at, key, value);
            else if (key == "fy") section.camera.intrinsics.fy = parse_one(at, key, value);
            else if (key == "cx") section.camera.intrinsics.cx = parse_one(at, key, value);
            else if (key == "cy") section.camera.intrinsics.cy = parse_one(at, key, value);
            else if (key == "skew") section.camera.intrinsics.skew = parse_one(at, key, value);
            else if (key == "extrinsics") {
                std::vector<double> numbers = parse_numbers(at, key, value, 16);
                std::copy(numbers.begin(), numbers.end(),
                          section.camera.extrinsics.matrix.m.begin());
                section.camera_has_extrinsics = true;
            } else if (key == "image_size") {
                std::vector<double> numbers = parse_numbers(at, key, value, 2);
                if (numbers[0] != std::floor(numbers[0]) || numbers[1] != std::floor(numbers[1])) {
                    at.fail("image_size must be two integers (height width)");
                }
                section.camera.image_height = static_cast<int>(numbers[0]);
                section.camera.image_width = static_cast<int>(numbers[1]);
            } else at.fail("unknown camera field '" + key + "'");
        }
    }
    if (section.name == "camera") finish_camera(section);

    ParseCursor end_at{source_name, at.line};
    if (!saw_strides) end_at.fail("missing top-level 'scale_strides'");
    if (!saw_grid) end_at.fail("missing [grid] section");
    if (config.rig.views.empty()) end_at.fail("no [camera] sections");
    try {
        config.rig.validate();
        config.grid.validate();
        config.kernel.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::Config, source_name + ": " + e.what());
    }
    return config;
}

SceneConfig load_scene_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    return parse_scene_config(in, path);
}

namespace {

void write_double(std::ostream& out, double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, end - buf);
}

} // namespace

void write_scene_config(const SceneConfig& config, std::ostream& out) {
    out << "# gkt scene config\n";
    out << "scale_strides =";
    for (int s : config.rig.scale_strides) out << " " << s;
    out << "\n\n[grid]\n";
    out << "rows = " << config.grid.rows << "\n";
    out << "cols = " << config.grid.cols << "\n";
    for (auto [key, value] : {std::pair<const char*, double>{"x_min", config.grid.x_min},
                              {"x_max", config.grid.x_max},
                              {"y_min", config.grid.y_min},
                              {"y_max", config.grid.y_max},
                              {"height_z", config.grid.height_z}}) {
        out << key << " = ";
        write_double(out, value);
        out << "\n";
    }
    out << "\n[kernel]\n";
    out << "k_h = " << config.kernel.k_h << "\n";
    out << "k_w = " << config.kernel.k_w << "\n";
    out << "layout = " << to_string(config.kernel.layout) << "\n";
    out << "dilation = " << config.kernel.dilation << "\n";
    for (const CameraView& view : config.rig.views) {
        out << "\n[camera]\n";
        out << "name = " << view.name << "\n";
        for (auto [key, value] : {std::pair<const char*, double>{"fx", view.intrinsics.fx},
                                  {"fy", view.intrinsics.fy},
                                  {"cx", view.intrinsics.cx},
                                  {"cy", view.intrinsics.cy},
                                  {"skew", view.intrinsics.skew}}) {
            out << key << " = ";
            write_double(out, value);
            out << "\n";
        }
        out << "extrinsics =";
        for (double v : view.extrinsics.matrix.m) {
            out << " ";
            write_double(out, v);
        }
        out << "\n";
        out << "image_size = " << view.image_height << " " << view.image_width << "\n";
    }
}

void save_scene_config(const SceneConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    write_scene_config(config, out);
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

} // namespace gkt
