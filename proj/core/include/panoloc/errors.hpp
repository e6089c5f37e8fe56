#ifndef PANOLOC_ERRORS_HPP
#define PANOLOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace panoloc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// geodesy
struct ZeroDisplacement : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };

// imaging
struct DimensionMismatch : Error { using Error::Error; };
struct ColumnOutOfRange : Error { using Error::Error; };

// triangulation
struct VerticalRay : Error { using Error::Error; };
struct ParallelRays : Error { using Error::Error; };
struct BehindSensor : Error { using Error::Error; };

// clustering
struct NoValidPairs : Error { using Error::Error; };

// detector boundary
struct BackendUnavailable : Error { using Error::Error; };
struct RateLimited : Error { using Error::Error; };
class MalformedResponse : public Error {
public:
  MalformedResponse(const std::string& msg, std::string payload)
      : Error(msg), payload_(std::move(payload)) {}
  const std::string& payload() const { return payload_; }

private:
  std::string payload_;  // retained for audit
};

// ingestion / IO
struct MissingColumn : Error { using Error::Error; };
struct EmptyTrack : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct IOFailure : Error { using Error::Error; };

}  // namespace panoloc

#endif
