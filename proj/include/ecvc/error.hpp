#pragma once

#include <stdexcept>
#include <string>

namespace ecvc {

enum class Errc {
  UnknownVertexLabel,
  IsolatedVertex,
  DuplicateVertexLabel,
  DuplicateEdgeLabel,
  DifferentComponents,
  MissingConstraint,
  ColorNotInIntersection,
  InstanceTooLarge,
  NoGlobalSolution,
  IndexOutOfRange,
  SexMissingOnX,
  UnreferencedLabel,
  MissingIbd,
  EmptyGraph,
  IdenticalIbd,
  OverlappingEventsUnresolvable,
  InvalidCrossoverSpec,
  ParseError,
  InvalidArgument,
  IoError,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace ecvc
