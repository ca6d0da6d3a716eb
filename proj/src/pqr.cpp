#include "gsparse/pqr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "gsparse/error.hpp"

namespace gsparse {

namespace {

bool parse_double(std::string_view tok, double& out) {
    // from_chars rejects a leading '+', which some writers emit.
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

Molecule::Molecule(std::vector<Atom> atoms, std::string source_path)
    : atoms_(std::move(atoms)), source_path_(std::move(source_path)) {
    if (atoms_.empty())
        throw Error(ErrorKind::EmptyMolecule, fmt::format("{}: no ATOM/HETATM records",
                                                          source_path_.empty() ? "<input>" : source_path_));
    for (const Atom& a : atoms_) {
        if (!a.center.allFinite())
            throw Error(ErrorKind::Validation, fmt::format("atom {}: non-finite coordinate", a.serial));
        if (!(a.radius > 0.0) || !std::isfinite(a.radius))
            throw Error(ErrorKind::Validation,
                        fmt::format("atom {}: radius must be positive, got {}", a.serial, a.radius));
    }
}

Molecule parse_pqr(std::istream& in, std::string source_path) {
    std::vector<Atom> atoms;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tok = split_ws(line);
        if (tok.empty() || (tok[0] != "ATOM" && tok[0] != "HETATM")) continue;
        if (tok.size() < 6)
            throw Error(ErrorKind::Parse, fmt::format("line {}: truncated {} record", line_no, tok[0]));

        const std::size_t tail = tok.size() - 5;
        double v[5];
        for (std::size_t f = 0; f < 5; ++f) {
            if (!parse_double(tok[tail + f], v[f]))
                throw Error(ErrorKind::Parse, fmt::format("line {}: malformed numeric field '{}'",
                                                          line_no, tok[tail + f]));
        }

        Atom a;
        a.center = Vec3(v[0], v[1], v[2]);
        a.charge = v[3];
        a.radius = v[4];
        a.serial = static_cast<long>(atoms.size() + 1);
        if (tok.size() > 1 && tail > 1) {
            long serial = 0;
            auto s = tok[1];
            if (std::from_chars(s.data(), s.data() + s.size(), serial).ec == std::errc()) a.serial = serial;
        }
        // ATOM serial name resName [chain] resSeq x y z q r
        if (tail > 2) a.name = std::string(tok[2]);
        if (tail > 3) a.residue = std::string(tok[3]);
        if (tail == 6) {
            a.chain = std::string(tok[4]);
            a.residue_seq = std::string(tok[5]);
        } else if (tail > 4) {
            a.residue_seq = std::string(tok[tail - 1]);
        }
        atoms.push_back(std::move(a));
    }
    return Molecule(std::move(atoms), std::move(source_path));
}

Molecule parse_pqr_text(std::string_view text, std::string source_path) {
    std::istringstream in{std::string(text)};
    return parse_pqr(in, std::move(source_path));
}

Molecule load_pqr(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open '{}'", path.string()));
    return parse_pqr(in, path.string());
}

std::string to_pqr(const Molecule& molecule) {
    std::string out;
    for (const Atom& a : molecule.atoms()) {
        auto label = [](const std::string& s, const char* fallback) { return s.empty() ? std::string(fallback) : s; };
        out += fmt::format("ATOM {} {} {} ", a.serial, label(a.name, "X"), label(a.residue, "UNK"));
        if (!a.chain.empty()) out += a.chain + " ";
        out += fmt::format("{} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g}\n", label(a.residue_seq, "1"),
                           a.center.x(), a.center.y(), a.center.z(), a.charge, a.radius);
    }
    return out;
}

}  // namespace gsparse
