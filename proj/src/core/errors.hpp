#pragma once

#include <stdexcept>
#include <string>

namespace pagelink {

// Stable error codes, mirrored one-to-one by plk_status in the public C header.
enum class ErrorCode : int {
  Ok = 0,
  Construction = 1,
  Lookup = 2,
  Parse = 3,
  Config = 4,
  Schema = 5,
  Alignment = 6,
  Numerical = 7,
  NoPath = 8,
  Degree = 9,
  Size = 10,
  Spec = 11,
  Generation = 12,
  UndefinedMetric = 13,
  Io = 14,
  InvalidArgument = 15,
  Internal = 16,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "ok";
    case ErrorCode::Construction: return "construction";
    case ErrorCode::Lookup: return "lookup";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Config: return "config";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Alignment: return "alignment";
    case ErrorCode::Numerical: return "numerical";
    case ErrorCode::NoPath: return "no-path";
    case ErrorCode::Degree: return "degree";
    case ErrorCode::Size: return "size";
    case ErrorCode::Spec: return "spec";
    case ErrorCode::Generation: return "generation";
    case ErrorCode::UndefinedMetric: return "undefined-metric";
    case ErrorCode::Io: return "io";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define PAGELINK_DEFINE_ERROR(Name, Code)                    \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& message)                \
        : Error(ErrorCode::Code, message) {}                 \
  }

PAGELINK_DEFINE_ERROR(ConstructionError, Construction);
PAGELINK_DEFINE_ERROR(LookupError, Lookup);
PAGELINK_DEFINE_ERROR(ParseError, Parse);
PAGELINK_DEFINE_ERROR(ConfigError, Config);
PAGELINK_DEFINE_ERROR(SchemaError, Schema);
PAGELINK_DEFINE_ERROR(AlignmentError, Alignment);
PAGELINK_DEFINE_ERROR(NumericalError, Numerical);
PAGELINK_DEFINE_ERROR(NoPathError, NoPath);
PAGELINK_DEFINE_ERROR(DegreeError, Degree);
PAGELINK_DEFINE_ERROR(SizeError, Size);
PAGELINK_DEFINE_ERROR(SpecError, Spec);
PAGELINK_DEFINE_ERROR(GenerationError, Generation);
PAGELINK_DEFINE_ERROR(UndefinedMetricError, UndefinedMetric);
PAGELINK_DEFINE_ERROR(IoError, Io);
PAGELINK_DEFINE_ERROR(InvalidArgumentError, InvalidArgument);

#undef PAGELINK_DEFINE_ERROR

}  // namespace pagelink
