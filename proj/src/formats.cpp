#include "slidingcubes/formats.hpp"

#include <fstream>
#include <sstream>

namespace sc {

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

int parse_int(const std::string& s, size_t line) {
    size_t pos = 0;
    int v;
    try {
        v = std::stoi(s, &pos);
    } catch (...) {
        throw ParseError("expected integer, got '" + s + "'", line);
    }
    if (pos != s.size()) throw ParseError("trailing characters in integer '" + s + "'", line);
    return v;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return f;
}

}  // namespace

Configuration read_configuration(std::istream& in) {
    std::string line;
    size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    ++lineno;
    if (line != "cubes v1") throw ParseError("bad header, expected 'cubes v1'", lineno);
    CellVec cells;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto t = tokens(line);
        if (t.size() != 3) throw ParseError("expected 'x y z'", lineno);
        cells.push_back({parse_int(t[0], lineno), parse_int(t[1], lineno), parse_int(t[2], lineno)});
    }
    if (cells.empty()) throw ParseError("no cells", lineno + 1);
    try {
        return Configuration(std::move(cells));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
    }
}

std::string write_configuration(const Configuration& c) {
    std::ostringstream out;
    out << "cubes v1\n";
    for (const auto& cell : c.cells()) out << cell.x << " " << cell.y << " " << cell.z << "\n";
    return out.str();
}

Configuration read_configuration_file(const std::string& path) {
    auto f = open_input(path);
    return read_configuration(f);
}

void write_configuration_file(const std::string& path, const Configuration& c) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << write_configuration(c);
}

Schedule read_schedule(std::istream& in) {
    std::string line;
    size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    ++lineno;
    if (line != "sched v1") throw ParseError("bad header, expected 'sched v1'", lineno);
    Schedule s;
    size_t expected_step = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto t = tokens(line);
        if (t[0] == "step") {
            if (t.size() != 2) throw ParseError("expected 'step k'", lineno);
            size_t k = (size_t)parse_int(t[1], lineno);
            if (k != expected_step + 1) throw ParseError("steps must be consecutive from 1", lineno);
            expected_step = k;
            s.steps.emplace_back();
            continue;
        }
        if (s.steps.empty()) throw ParseError("move before first 'step' line", lineno);
        if (t[0] == "S") {
            if (t.size() != 8 || t[4] != "->") throw ParseError("expected 'S x y z -> x y z'", lineno);
            Coord from{parse_int(t[1], lineno), parse_int(t[2], lineno), parse_int(t[3], lineno)};
            Coord to{parse_int(t[5], lineno), parse_int(t[6], lineno), parse_int(t[7], lineno)};
            s.steps.back().push_back(Move::slide(from, to));
        } else if (t[0] == "C") {
            if (t.size() != 12 || t[4] != "->" || t[8] != "via")
                throw ParseError("expected 'C x y z -> x y z via cx cy cz'", lineno);
            Coord from{parse_int(t[1], lineno), parse_int(t[2], lineno), parse_int(t[3], lineno)};
            Coord to{parse_int(t[5], lineno), parse_int(t[6], lineno), parse_int(t[7], lineno)};
            Coord via{parse_int(t[9], lineno), parse_int(t[10], lineno), parse_int(t[11], lineno)};
            s.steps.back().push_back(Move::convex_via(from, to, via));
        } else {
            throw ParseError("unknown move kind '" + t[0] + "'", lineno);
        }
    }
    return s;
}

std::string write_schedule(const Schedule& s) {
    std::ostringstream out;
    out << "sched v1\n";
    for (size_t i = 0; i < s.steps.size(); ++i) {
        out << "step " << (i + 1) << "\n";
        for (const auto& m : s.steps[i]) {
            if (m.kind == MoveKind::Slide) {
                out << "S " << m.from.x << " " << m.from.y << " " << m.from.z << " -> " << m.to.x
                    << " " << m.to.y << " " << m.to.z << "\n";
            } else {
                out << "C " << m.from.x << " " << m.from.y << " " << m.from.z << " -> " << m.to.x
                    << " " << m.to.y << " " << m.to.z << " via " << m.corner.x << " " << m.corner.y
                    << " " << m.corner.z << "\n";
            }
        }
    }
    return out.str();
}

Schedule read_schedule_file(const std::string& path) {
    auto f = open_input(path);
    return read_schedule(f);
}

void write_schedule_file(const std::string& path, const Schedule& s) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << write_schedule(s);
}

}  // namespace sc
