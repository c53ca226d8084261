#ifndef LOWFREQ_ERRORS_HPP
#define LOWFREQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lowfreq {

// Base class for all library errors. The CLI maps subclasses onto exit codes:
// input/validation problems -> 2, numerical non-convergence -> 3,
// mathematical precondition violations -> 4.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// -- input / validation -------------------------------------------------
class InvalidGeometry : public Error {
public:
    using Error::Error;
};
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// -- numerical non-convergence -------------------------------------------
class NonConvergent : public Error {
public:
    using Error::Error;
};
class NonConvergentSum : public Error {
public:
    using Error::Error;
};
class SingularSystem : public Error {
public:
    using Error::Error;
};

// -- mathematical precondition violations ----------------------------------
class DomainError : public Error {
public:
    using Error::Error;
};
class OrderOverflow : public Error {
public:
    using Error::Error;
};
// Y_n(x) exceeded the double range during recurrence; `sign` records the
// sign of the diverging value.
class BesselOverflow : public Error {
public:
    BesselOverflow(const std::string& msg, int sign_) : Error(msg), sign(sign_) {}
    int sign;
};
class RebaseRequired : public Error {
public:
    using Error::Error;
};
class NotAUnit : public Error {
public:
    using Error::Error;
};
class SingularAlpha : public Error {
public:
    using Error::Error;
};
class NegativePowersPresent : public Error {
public:
    using Error::Error;
};
class PoleAtShift : public Error {
public:
    using Error::Error;
};
class TooCloseToBoundary : public Error {
public:
    using Error::Error;
};
class AtanPole : public Error {
public:
    using Error::Error;
};
class NotResolved : public Error {
public:
    using Error::Error;
};

} // namespace lowfreq

#endif
