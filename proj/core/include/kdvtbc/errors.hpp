#ifndef KDVTBC_ERRORS_HPP
#define KDVTBC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kdvtbc {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// poly_roots
struct DegenerateRoot : Error { using Error::Error; };
struct NonSeparated : Error { using Error::Error; };
struct TrackingAmbiguity : Error { using Error::Error; };
struct SeparationViolation : Error { using Error::Error; };

// ztrans / kernels
struct NonRealResult : Error { using Error::Error; };

// soe
struct PadeSingular : Error { using Error::Error; };
struct PoleInsideDisk : Error { using Error::Error; };
struct RepeatedPole : Error { using Error::Error; };

// solver
struct BandwidthViolation : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct StabilityViolation : Error { using Error::Error; };

// reference
struct OutOfRange : Error { using Error::Error; };
struct QuadratureNoConvergence : Error { using Error::Error; };

// experiments
struct ZeroReferenceNorm : Error { using Error::Error; };

struct InvalidSpec : Error { using Error::Error; };

} // namespace kdvtbc

#endif
