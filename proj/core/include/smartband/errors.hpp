#pragma once

#include <stdexcept>
#include <string>

namespace smartband {

// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SMARTBAND_ERROR(NAME)                                  \
    class NAME : public Error {                                \
    public:                                                    \
        explicit NAME(const std::string& what) : Error(what) {} \
    }

// ingest
SMARTBAND_ERROR(MissingHeader);
SMARTBAND_ERROR(UnknownColumn);
SMARTBAND_ERROR(NonMonotonicTime);
SMARTBAND_ERROR(EmptyInput);
SMARTBAND_ERROR(EmptyProfileList);

// model
SMARTBAND_ERROR(InsufficientData);
SMARTBAND_ERROR(DegeneratePredictor);
SMARTBAND_ERROR(KTooLarge);
SMARTBAND_ERROR(ZeroTotalSS);

// detector
SMARTBAND_ERROR(OutOfOrderSample);

// alerting
SMARTBAND_ERROR(DeviceIdTooLong);
SMARTBAND_ERROR(DeviceIdNotGsmSafe);
SMARTBAND_ERROR(InvalidRecipient);
SMARTBAND_ERROR(NoContacts);

// app
SMARTBAND_ERROR(ConfigError);
SMARTBAND_ERROR(IoError);

#undef SMARTBAND_ERROR

}  // namespace smartband
