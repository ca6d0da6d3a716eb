#pragma once

#include <stdexcept>
#include <string>

namespace gsparse {

enum class ErrorKind {
    InvalidArgument,
    Parse,
    Validation,
    EmptyMolecule,
    EmptySelection,
    ModelCollapse,
    NonFinite,
    EmptyMesh,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Contract check used at module boundaries.
inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorKind::InvalidArgument, what);
}

}  // namespace gsparse
