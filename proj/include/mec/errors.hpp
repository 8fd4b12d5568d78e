#pragma once

#include <stdexcept>
#include <string>

namespace mec {

// Base class for every error thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A mass was negative beyond tolerance.
class negative_mass_error : public error {
public:
    using error::error;
};

// Masses did not sum to one (and renormalization was not requested).
class not_normalized_error : public error {
public:
    using error::error;
};

// Prefix length or state index outside the valid range.
class index_error : public error {
public:
    using error::error;
};

// Parameter outside its mathematical domain (gamma, z, n, ...).
class domain_error : public error {
public:
    using error::error;
};

// Strong-majorization scan found a prefix of p exceeding total mass of q.
class no_covering_prefix_error : public error {
public:
    using error::error;
};

// An operation was called with its stated precondition unsatisfied.
class precondition_error : public error {
public:
    using error::error;
};

// A per-state lower-bound certificate failed. Signals an implementation
// bug in the greedy coupler or the meet, never a valid outcome.
class certificate_violation : public error {
public:
    using error::error;
};

// A proven entropy inequality failed on computed numbers. Same contract
// as certificate_violation: implementation-bug signal.
class bound_violation : public error {
public:
    using error::error;
};

// The supplied j' is not a maximizer of the G' recursion at i'; the
// adversary construction's mass identity does not hold for it.
class invalid_witness_error : public error {
public:
    using error::error;
};

// defeat_check candidate support exceeds the exhaustive-search cap.
class support_too_large_error : public error {
public:
    using error::error;
};

// A coupling failed validation against its instance.
class coupling_error : public error {
public:
    using error::error;
};

// Instance file could not be parsed; message carries the location.
class parse_error : public error {
public:
    using error::error;
};

}  // namespace mec
