#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gsparse/types.hpp"

namespace gsparse {

struct Atom {
    Vec3 center = Vec3::Zero();  // Å
    double radius = 0.0;         // Å
    double charge = 0.0;         // e; carried through, never used by the math
    long serial = 0;
    std::string name;
    std::string residue;
    std::string chain;           // empty when the record has no chain column
    std::string residue_seq;
};

/// Immutable, validated atom list.
class Molecule {
public:
    /// Throws EmptyMolecule / Validation errors when the invariants fail.
    Molecule(std::vector<Atom> atoms, std::string source_path = {});

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    const std::string& source_path() const { return source_path_; }

private:
    std::vector<Atom> atoms_;
    std::string source_path_;
};

// Whitespace-delimited PQR. Only ATOM/HETATM records are read; the last five
// tokens of a record are x y z charge radius, so the optional chain column
// does not matter.
Molecule parse_pqr(std::istream& in, std::string source_path = {});
Molecule parse_pqr_text(std::string_view text, std::string source_path = {});
Molecule load_pqr(const std::filesystem::path& path);

/// Serialises with 17 significant digits so that re-parsing is exact.
std::string to_pqr(const Molecule& molecule);

}  // namespace gsparse
