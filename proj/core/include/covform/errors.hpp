#pragma once

#include <stdexcept>
#include <string>

namespace covform {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A config or input document violated a declared invariant. `field` names
// the offending entry (e.g. "n_followers", "obstacles[2]").
struct ValidationError : Error {
  explicit ValidationError(const std::string& field_, const std::string& what_)
      : Error(field_ + ": " + what_), field(field_) {}
  std::string field;
};

struct ParseError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NotATreeError : Error {
  using Error::Error;
};

struct DisconnectedGraphError : Error {
  using Error::Error;
};

struct NotConnectedInput : Error {
  using Error::Error;
};

// Candidate search found no feasible point of the connection-region union.
struct NoFeasibleProjection : Error {
  using Error::Error;
};

// NoFeasibleProjection surfaced while reconfiguring agent `agent`; the
// mission halts with a diagnostic.
struct ProjectionFailed : Error {
  ProjectionFailed(int agent_, const std::string& what_)
      : Error("agent " + std::to_string(agent_) + ": " + what_), agent(agent_) {}
  int agent;
};

struct NoFeasibleStart : Error {
  using Error::Error;
};

}  // namespace covform
