#pragma once

#include <stdexcept>
#include <string>

namespace lcft {

struct MixedFields : std::runtime_error {
    explicit MixedFields(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByZeroToPrecision : std::runtime_error {
    explicit DivisionByZeroToPrecision(const std::string& what) : std::runtime_error(what) {}
};

struct NotEisenstein : std::runtime_error {
    explicit NotEisenstein(const std::string& what) : std::runtime_error(what) {}
};

struct NotFrobeniusSeries : std::runtime_error {
    explicit NotFrobeniusSeries(const std::string& what) : std::runtime_error(what) {}
};

struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct StageMismatch : std::runtime_error {
    explicit StageMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct TowerMismatch : std::runtime_error {
    explicit TowerMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Signals that the requested computation needs a larger residue extension
// degree; `suggested_m` is the smallest degree known to suffice (0 if unknown).
struct ResidueExtensionRequired : std::runtime_error {
    unsigned suggested_m;
    ResidueExtensionRequired(const std::string& what, unsigned m)
        : std::runtime_error(what + " (suggested m = " + std::to_string(m) + ")"), suggested_m(m) {}
};

struct NotNormCompatible : std::runtime_error {
    int level;
    NotNormCompatible(const std::string& what, int lv)
        : std::runtime_error(what + " (level " + std::to_string(lv) + ")"), level(lv) {}
};

struct NotStabilized : std::runtime_error {
    int achieved;  // agreement precision reached before the failure
    NotStabilized(const std::string& what, int got)
        : std::runtime_error(what + " (achieved agreement " + std::to_string(got) + ")"), achieved(got) {}
};

struct StabilizationNotReached : std::runtime_error {
    explicit StabilizationNotReached(const std::string& what) : std::runtime_error(what) {}
};

struct NormIncoherent : std::runtime_error {
    explicit NormIncoherent(const std::string& what) : std::runtime_error(what) {}
};

struct FixedFieldTooSmall : std::runtime_error {
    explicit FixedFieldTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct AmbiguousClass : std::runtime_error {
    explicit AmbiguousClass(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownPreimage : std::runtime_error {
    explicit UnknownPreimage(const std::string& what) : std::runtime_error(what) {}
};

struct SpecFileError : std::runtime_error {
    explicit SpecFileError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lcft
