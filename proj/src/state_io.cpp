#include "fermred/state_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fermred {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

FockVector parse_state(std::istream& in) {
    std::string line;
    int line_no = 0;
    int n = -1;
    bool normalize = false;
    FockVector v;
    std::set<std::string> seen;

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;

        if (tok == "modes") {
            if (n >= 0) throw StateParseError(line_no, "duplicate 'modes' line");
            if (!(ls >> n)) throw StateParseError(line_no, "expected a mode count");
            if (n < 1 || n > kMaxModes)
                throw StateParseError(line_no, "mode count out of range [1, " +
                                                   std::to_string(kMaxModes) + "]");
            v = FockVector(n);
            continue;
        }
        if (tok == "normalize") {
            std::string flag;
            if (!(ls >> flag) || (flag != "true" && flag != "false"))
                throw StateParseError(line_no, "expected 'normalize true|false'");
            normalize = (flag == "true");
            continue;
        }
        if (n < 0) throw StateParseError(line_no, "'modes <n>' must come first");

        const std::string& bits = tok;
        if (static_cast<int>(bits.size()) != n)
            throw StateParseError(line_no, "bitstring '" + bits + "' is not " +
                                               std::to_string(n) + " characters");
        std::uint32_t idx = 0;
        for (char ch : bits) {
            if (ch != '0' && ch != '1')
                throw StateParseError(line_no, "bitstring may only contain 0 and 1");
            idx = (idx << 1) | static_cast<std::uint32_t>(ch - '0');
        }
        if (!seen.insert(bits).second)
            throw StateParseError(line_no, "duplicate bitstring '" + bits + "'");
        double re = 0.0, im = 0.0;
        if (!(ls >> re >> im))
            throw StateParseError(line_no, "expected '<bits> <re> <im>'");
        std::string extra;
        if (ls >> extra) throw StateParseError(line_no, "trailing token '" + extra + "'");
        v.amp[idx] = cplx(re, im);
    }
    if (n < 0) throw StateParseError(line_no, "missing 'modes <n>' line");
    const double norm2 = v.norm2();
    if (norm2 == 0.0) throw StateParseError(line_no, "state has no nonzero amplitude");
    if (normalize) v.normalize();
    else if (std::abs(norm2 - 1.0) > 1e-9)
        throw StateParseError(line_no, "amplitudes are not normalized (|psi|^2 = " +
                                           format_double(norm2) +
                                           "); add 'normalize true' to rescale");
    return v;
}

FockVector load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open state file: " + path);
    return parse_state(in);
}

void write_state(std::ostream& out, const FockVector& v) {
    out << "modes " << v.n << "\n";
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (v.amp[i] == cplx(0.0, 0.0)) continue;
        out << MultiIndex::from_index(v.n, static_cast<std::uint32_t>(i)).bitstring() << ' '
            << format_double(v.amp[i].real()) << ' ' << format_double(v.amp[i].imag())
            << "\n";
    }
}

void save_state(const std::string& path, const FockVector& v) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_state(out, v);
}

} // namespace fermred
