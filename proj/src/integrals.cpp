#include "rdmpurify/integrals.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rdmpurify {

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return s;
}

struct FcidumpHeader {
    int norb = -1;
    int nelec = -1;
    int ms2 = 0;
};

// Namelist section: everything from &FCIDUMP up to &END or a bare '/'.
// Only NORB, NELEC and MS2 are used; ORBSYM and ISYM are parsed and ignored.
FcidumpHeader parse_header(std::istream& in, int& line_no) {
    FcidumpHeader hdr;
    std::string text;
    std::string line;
    bool started = false;
    bool done = false;
    while (!done && std::getline(in, line)) {
        ++line_no;
        std::string u = upper(line);
        if (!started) {
            auto amp = u.find("&FCIDUMP");
            if (amp == std::string::npos) {
                if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
                throw std::runtime_error("FCIDUMP parse error at line " +
                                         std::to_string(line_no) +
                                         ": expected &FCIDUMP header");
            }
            started = true;
            u = u.substr(amp + 8);
        }
        auto end = u.find("&END");
        if (end == std::string::npos) end = u.find('/');
        if (end != std::string::npos) {
            u = u.substr(0, end);
            done = true;
        }
        text += " " + u;
    }
    if (!started)
        throw std::runtime_error("FCIDUMP parse error: missing &FCIDUMP header");
    if (!done)
        throw std::runtime_error("FCIDUMP parse error: unterminated namelist header");

    // split on commas/whitespace into KEY=VALUE tokens; ORBSYM's value list
    // arrives as lone integers and is skipped.
    for (auto& c : text)
        if (c == ',' || c == '\t' || c == '\r') c = ' ';
    std::istringstream toks(text);
    std::string tok;
    std::string key;
    while (toks >> tok) {
        auto eq = tok.find('=');
        std::string value;
        if (eq != std::string::npos) {
            key = tok.substr(0, eq);
            value = tok.substr(eq + 1);
        } else if (!key.empty()) {
            value = tok;
        } else {
            continue;
        }
        if (value.empty()) continue;
        if (key == "NORB" || key == "NELEC" || key == "MS2") {
            int parsed = 0;
            try {
                parsed = std::stoi(value);
            } catch (const std::exception&) {
                throw std::runtime_error("FCIDUMP parse error: bad value for " + key);
            }
            if (key == "NORB") hdr.norb = parsed;
            if (key == "NELEC") hdr.nelec = parsed;
            if (key == "MS2") hdr.ms2 = parsed;
            key.clear();
        }
    }
    if (hdr.norb <= 0)
        throw std::runtime_error("FCIDUMP parse error: NORB missing or not positive");
    if (hdr.nelec < 0)
        throw std::runtime_error("FCIDUMP parse error: NELEC missing");
    return hdr;
}

} // namespace

MolecularIntegrals parse_fcidump(std::istream& in, const std::string& label) {
    int line_no = 0;
    FcidumpHeader hdr = parse_header(in, line_no);
    int norb = hdr.norb;

    // spatial chemist-notation integrals, all 8 symmetry images filled
    Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(norb, norb);
    std::vector<double> chem(static_cast<std::size_t>(norb) * norb * norb * norb, 0.0);
    auto chem_at = [&](int i, int j, int k, int l) -> double& {
        return chem[((static_cast<std::size_t>(i) * norb + j) * norb + k) * norb + l];
    };
    double e_core = 0.0;

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        double value;
        long i, j, k, l;
        if (!(ls >> value >> i >> j >> k >> l))
            throw std::runtime_error("FCIDUMP parse error at line " +
                                     std::to_string(line_no) +
                                     ": expected `value i j k l`");
        for (long idx : {i, j, k, l})
            if (idx < 0 || idx > norb)
                throw std::runtime_error("FCIDUMP orbital index out of range [0, " +
                                         std::to_string(norb) + "] at line " +
                                         std::to_string(line_no));
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            e_core = value;
        } else if (j == 0 && k == 0 && l == 0) {
            // orbital energy record; not used
        } else if (k == 0 && l == 0) {
            if (i == 0 || j == 0)
                throw std::runtime_error("FCIDUMP parse error at line " +
                                         std::to_string(line_no) +
                                         ": partial one-body index");
            h1(i - 1, j - 1) = value;
            h1(j - 1, i - 1) = value;
        } else {
            if (i == 0 || j == 0 || k == 0 || l == 0)
                throw std::runtime_error("FCIDUMP parse error at line " +
                                         std::to_string(line_no) +
                                         ": partial two-body index");
            int a = static_cast<int>(i) - 1, b = static_cast<int>(j) - 1;
            int c = static_cast<int>(k) - 1, d = static_cast<int>(l) - 1;
            // real-orbital 8-fold symmetry of (ab|cd)
            chem_at(a, b, c, d) = value;
            chem_at(b, a, c, d) = value;
            chem_at(a, b, d, c) = value;
            chem_at(b, a, d, c) = value;
            chem_at(c, d, a, b) = value;
            chem_at(d, c, a, b) = value;
            chem_at(c, d, b, a) = value;
            chem_at(d, c, b, a) = value;
        }
    }

    MolecularIntegrals out;
    out.r = 2 * norb;
    out.e_core = e_core;
    out.label = label;
    out.h = Eigen::MatrixXd::Zero(out.r, out.r);
    out.V.assign(static_cast<std::size_t>(out.r) * out.r * out.r * out.r, 0.0);

    // spin expansion: same-spin rule for h, spin conservation within each
    // electron for V; chemist (PR|QS) becomes physicist <pq|rs>.
    for (int p = 0; p < out.r; ++p)
        for (int q = 0; q < out.r; ++q)
            if ((p & 1) == (q & 1)) out.h(p, q) = h1(p / 2, q / 2);
    for (int p = 0; p < out.r; ++p)
        for (int q = 0; q < out.r; ++q)
            for (int rr = 0; rr < out.r; ++rr)
                for (int s = 0; s < out.r; ++s) {
                    if ((p & 1) != (rr & 1) || (q & 1) != (s & 1)) continue;
                    out.v(p, q, rr, s) = chem_at(p / 2, rr / 2, q / 2, s / 2);
                }
    return out;
}

MolecularIntegrals parse_fcidump_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open FCIDUMP file: " + path);
    auto slash = path.find_last_of('/');
    return parse_fcidump(in, slash == std::string::npos ? path : path.substr(slash + 1));
}

MolecularIntegrals hubbard_chain(int L, double t, double U, Boundary boundary) {
    if (L < 2) throw std::invalid_argument("hubbard_chain: L >= 2 required");
    MolecularIntegrals out;
    out.r = 2 * L;
    out.e_core = 0.0;
    out.label = "hubbard_L" + std::to_string(L);
    out.h = Eigen::MatrixXd::Zero(out.r, out.r);
    out.V.assign(static_cast<std::size_t>(out.r) * out.r * out.r * out.r, 0.0);

    std::set<std::pair<int, int>> bonds;
    for (int s = 0; s + 1 < L; ++s) bonds.insert({s, s + 1});
    if (boundary == Boundary::periodic) bonds.insert({0, L - 1});
    for (auto [a, b] : bonds)
        for (int spin = 0; spin < 2; ++spin) {
            out.h(2 * a + spin, 2 * b + spin) = -t;
            out.h(2 * b + spin, 2 * a + spin) = -t;
        }
    for (int s = 0; s < L; ++s) {
        int up = 2 * s, dn = 2 * s + 1;
        out.v(up, dn, up, dn) = U;
        out.v(dn, up, dn, up) = U;
    }
    return out;
}

} // namespace rdmpurify
