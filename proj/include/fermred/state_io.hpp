#ifndef FERMRED_STATE_IO_HPP
#define FERMRED_STATE_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "fermred/fock.hpp"

namespace fermred {

// Text state format, one amplitude per line with an explicit bitstring:
//
//   modes 2
//   normalize false
//   00  0.5 0
//   01  0.5 0
//   10  0.5 0
//   11  0.5 0
//
// `normalize true` lets the loader rescale; otherwise the amplitudes must
// already have unit norm within 1e-9.  '#' starts a comment.
struct StateParseError : std::runtime_error {
    int line = 0;
    explicit StateParseError(int line_no, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

FockVector parse_state(std::istream& in);
FockVector load_state(const std::string& path);

void write_state(std::ostream& out, const FockVector& v);
void save_state(const std::string& path, const FockVector& v);

std::string format_double(double v); // round-trip safe (17 significant digits)

} // namespace fermred

#endif
