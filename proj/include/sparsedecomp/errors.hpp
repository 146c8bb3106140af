#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sparsedecomp {

// Base of everything the library throws on a contract violation.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

struct SingularMap : Error {
  SingularMap() : Error("monomial map has zero determinant") {}
};

struct ZeroCoordinate : Error {
  explicit ZeroCoordinate(std::size_t index)
      : Error("coordinate " + std::to_string(index) + " is zero; point is not in the torus") {}
};

struct EmptyPolynomial : Error {
  explicit EmptyPolynomial(std::size_t index)
      : Error("polynomial " + std::to_string(index) + " has no terms") {}
};

// Difference lattice of the supports is not full rank: the family is not a branched cover.
struct RankDeficient : Error {
  RankDeficient(std::size_t rank, std::size_t n)
      : Error("support differences span a lattice of rank " + std::to_string(rank) + " < " +
              std::to_string(n)) {}
};

struct NotLacunary : Error {
  NotLacunary() : Error("system is not lacunary") {}
};

struct NotTriangular : Error {
  NotTriangular() : Error("system is not triangular") {}
};

struct DegreeZero : Error {
  DegreeZero() : Error("univariate polynomial has degree zero") {}
};

struct InvalidStart : Error {
  explicit InvalidStart(double residual)
      : Error("start point residual " + std::to_string(residual) + " exceeds tolerance") {}
};

struct SingularJacobian : Error {
  SingularJacobian() : Error("Jacobian is numerically singular") {}
};

struct SolverFailure : Error {
  using Error::Error;
};

struct SubprocessFailure : Error {
  using Error::Error;
};

}  // namespace sparsedecomp
