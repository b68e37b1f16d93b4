#ifndef WORMSZEGO_ERRORS_HPP
#define WORMSZEGO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wormszego {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct BetaOutOfRange : Error {
    explicit BetaOutOfRange(const std::string& msg) : Error(msg) {}
};

struct HOutOfRange : Error {
    explicit HOutOfRange(const std::string& msg) : Error(msg) {}
};

struct FaceRangeError : Error {
    explicit FaceRangeError(const std::string& msg) : Error(msg) {}
};

struct PathLeavesDomain : Error {
    explicit PathLeavesDomain(const std::string& msg) : Error(msg) {}
};

struct NoDecay : Error {
    explicit NoDecay(const std::string& msg) : Error(msg) {}
};

struct ToleranceNotMet : Error {
    explicit ToleranceNotMet(const std::string& msg) : Error(msg) {}
};

struct SeriesDiverged : Error {
    explicit SeriesDiverged(const std::string& msg) : Error(msg) {}
};

struct OutsideDomain : Error {
    explicit OutsideDomain(const std::string& msg) : Error(msg) {}
};

struct FitUnstable : Error {
    explicit FitUnstable(const std::string& msg) : Error(msg) {}
};

struct NoMatchingTemplate : Error {
    explicit NoMatchingTemplate(const std::string& msg) : Error(msg) {}
};

struct UnknownFace : Error {
    explicit UnknownFace(const std::string& msg) : Error(msg) {}
};

struct TestPointDegenerate : Error {
    explicit TestPointDegenerate(const std::string& msg) : Error(msg) {}
};

} // namespace wormszego

#endif
