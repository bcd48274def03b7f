#ifndef CMBKF_ERRORS_HPP
#define CMBKF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmbkf {

// Working precision ran out before a result could be certified.  Callers
// that control the precision budget may retry with a larger one.
class PrecisionExhausted : public std::runtime_error {
public:
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Newton iteration was requested from a starting point that does not
// satisfy |f(r0)| < |f'(r0)|^2.
class HenselConditionFailed : public std::runtime_error {
public:
    explicit HenselConditionFailed(const std::string& what) : std::runtime_error(what) {}
};

class NotEisenstein : public std::invalid_argument {
public:
    explicit NotEisenstein(const std::string& what) : std::invalid_argument(what) {}
};

class PrimitiveElementSearchFailed : public std::runtime_error {
public:
    explicit PrimitiveElementSearchFailed(const std::string& what) : std::runtime_error(what) {}
};

// A Galois container (or compositum) was not found inside the configured
// degree bound.
class DegreeBoundExceeded : public std::runtime_error {
public:
    explicit DegreeBoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Two characters / types were combined at different Galois levels.
class LevelMismatch : public std::invalid_argument {
public:
    explicit LevelMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Subgroup pair passed to a norm construction is not nested.
class NotNested : public std::invalid_argument {
public:
    explicit NotNested(const std::string& what) : std::invalid_argument(what) {}
};

// Matrix is singular at the working truncation (determinant valuation not
// certified below the cap).
class Singular : public std::runtime_error {
public:
    explicit Singular(const std::string& what) : std::runtime_error(what) {}
};

class NotInjective : public std::invalid_argument {
public:
    explicit NotInjective(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace cmbkf

#endif
