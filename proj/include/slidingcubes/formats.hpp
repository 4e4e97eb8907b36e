#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "slidingcubes/moves.hpp"

namespace sc {

/// Parse failure with a 1-based line number.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    size_t line;
};

/// `cubes v1` format: header line, then one cell per line as `x y z`,
/// lexicographically sorted. Serialization round-trips byte-exact.
Configuration read_configuration(std::istream& in);
Configuration read_configuration_file(const std::string& path);
std::string write_configuration(const Configuration& c);
void write_configuration_file(const std::string& path, const Configuration& c);

/// `sched v1` format: header, steps introduced by `step k` (1-based), one
/// move per line: `S x y z -> x' y' z'` or `C x y z -> x' y' z' via cx cy cz`.
Schedule read_schedule(std::istream& in);
Schedule read_schedule_file(const std::string& path);
std::string write_schedule(const Schedule& s);
void write_schedule_file(const std::string& path, const Schedule& s);

}  // namespace sc
