#ifndef GRIDPLAN_ERRORS_HPP
#define GRIDPLAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gridplan {

// Map text could not be parsed or violates the map schema. Carries the
// offending field name where one can be identified.
class MapFormatError : public std::runtime_error {
public:
    explicit MapFormatError(const std::string& what) : std::runtime_error(what) {}
};

// Network / HTTP failure while talking to the model endpoint.
class LlmTransportError : public std::runtime_error {
public:
    explicit LlmTransportError(const std::string& what) : std::runtime_error(what) {}
};

// The model replied, but no waypoint list could be extracted. Keeps the raw
// reply so callers can log it.
class LlmFormatError : public std::runtime_error {
public:
    LlmFormatError(const std::string& what, std::string raw)
        : std::runtime_error(what), raw_text(std::move(raw)) {}
    std::string raw_text;
};

}  // namespace gridplan

#endif
