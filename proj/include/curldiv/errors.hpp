#pragma once

#include <stdexcept>
#include <string>

namespace curldiv {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid mesh input: degenerate or duplicate cells, non-manifold faces.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent topology: disconnected graphs, rank mismatches, period violations.
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Problem data that violates a compatibility requirement.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failure (non-convergence, loss of positive definiteness).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// File system failure while reading or writing.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace curldiv
