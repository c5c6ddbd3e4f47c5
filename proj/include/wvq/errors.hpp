#pragma once

#include <stdexcept>
#include <string>

namespace wvq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
    using Error::Error;
};
struct InvalidSpec : Error {
    using Error::Error;
};
struct NotPSD : Error {
    using Error::Error;
};
struct SingularCovariance : Error {
    using Error::Error;
};
struct InsufficientData : Error {
    using Error::Error;
};
struct DegenerateGradient : Error {
    using Error::Error;
};
struct CorruptAssignment : Error {
    using Error::Error;
};
struct DivergedTraining : Error {
    using Error::Error;
};
struct InsufficientResolution : Error {
    using Error::Error;
};
struct ReportWriteError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

} // namespace wvq
