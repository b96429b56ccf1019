#pragma once

#include <stdexcept>
#include <string>

namespace scalebench {

/// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed dataset text (KEEL grammar, bad cells, arity).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Filesystem problems: missing fold files, unwritable outputs.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace scalebench
