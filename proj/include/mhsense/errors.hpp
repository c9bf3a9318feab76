#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mhsense {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- templating / output parsing ----

class TemplateError : public Error {
public:
    using Error::Error;
};

class MissingSlot : public TemplateError {
public:
    explicit MissingSlot(std::string slot)
        : TemplateError("unbound required slot <" + slot + ">"), slot(std::move(slot)) {}
    std::string slot;
};

// A ParseError signals the caller that the model reply did not follow the
// requested format; callers retry the request before surfacing it.
class ParseError : public Error {
public:
    using Error::Error;
};

class MissingLabel : public ParseError {
public:
    explicit MissingLabel(std::string label)
        : ParseError("missing label '" + label + "' in reply"), label(std::move(label)) {}
    std::string label;
};

class MalformedNumeric : public ParseError {
public:
    MalformedNumeric(std::string label, std::string raw)
        : ParseError("label '" + label + "' is not an integer: \"" + raw + "\""),
          label(std::move(label)), raw(std::move(raw)) {}
    std::string label;
    std::string raw;
};

class EmptyList : public ParseError {
public:
    EmptyList() : ParseError("no '# ' items found in reply") {}
    using ParseError::ParseError;
};

class LabelCountMismatch : public ParseError {
public:
    LabelCountMismatch(std::size_t expected, std::size_t got)
        : ParseError("expected " + std::to_string(expected) + " labeled lines, got " +
                     std::to_string(got)),
          expected(expected), got(got) {}
    std::size_t expected;
    std::size_t got;
};

class UnknownLabelToken : public ParseError {
public:
    explicit UnknownLabelToken(std::string raw)
        : ParseError("unrecognized label token: \"" + raw + "\""), raw(std::move(raw)) {}
    std::string raw;
};

class UnknownVignette : public ParseError {
public:
    explicit UnknownVignette(std::string raw)
        : ParseError("vignette name matches none of the known options: \"" + raw + "\""),
          raw(std::move(raw)) {}
    std::string raw;
};

class UnresolvableFactIndex : public ParseError {
public:
    explicit UnresolvableFactIndex(std::string raw)
        : ParseError("cited fact number outside the provided list: \"" + raw + "\""),
          raw(std::move(raw)) {}
    std::string raw;
};

class UnknownStageToken : public ParseError {
public:
    explicit UnknownStageToken(std::string raw)
        : ParseError("stage token is neither MOVENEXTSTAGE nor STAYCURRENTSTAGE: \"" + raw + "\""),
          raw(std::move(raw)) {}
    std::string raw;
};

class OutOfRangeScore : public ParseError {
public:
    explicit OutOfRangeScore(long long value)
        : ParseError("score " + std::to_string(value) + " outside 1-4"), value(value) {}
    long long value;
};

class NonBinaryScore : public ParseError {
public:
    explicit NonBinaryScore(long long value)
        : ParseError("accuracy label " + std::to_string(value) + " is not 0/1"), value(value) {}
    long long value;
};

class JudgeParseError : public ParseError {
public:
    using ParseError::ParseError;
};

// ---- gateway ----

class GatewayError : public Error {
public:
    using Error::Error;
};

// Retryable transport-level failure (connection refused, 5xx, 429, timeout).
class TransportError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

class AuthError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

// Non-retryable rejection from the backend (bad request, policy refusal,
// or a scripted backend with no reply for the request).
class BackendRefusal : public GatewayError {
public:
    using GatewayError::GatewayError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// ---- file formats ----

class IoError : public Error {
public:
    using Error::Error;
};

class SchemaVersionMismatch : public IoError {
public:
    explicit SchemaVersionMismatch(long long found)
        : IoError("unsupported schema_version " + std::to_string(found)), found(found) {}
    long long found;
};

class MalformedLine : public IoError {
public:
    MalformedLine(std::size_t line_no, const std::string& why)
        : IoError("line " + std::to_string(line_no) + ": " + why), line_no(line_no) {}
    std::size_t line_no;
};

// ---- evaluation / analytics ----

class EmptyDataset : public Error {
public:
    EmptyDataset() : Error("no records to process") {}
    using Error::Error;
};

class MissingDiagnosisMessage : public Error {
public:
    MissingDiagnosisMessage() : Error("transcript has no ProvidingInformation sensemaker message") {}
};

class NoSentences : public Error {
public:
    NoSentences() : Error("text contains no sentences") {}
};

class DegenerateSample : public Error {
public:
    using Error::Error;
};

}  // namespace mhsense
