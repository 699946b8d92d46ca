#pragma once

#include <stdexcept>
#include <string>

namespace bamdp {

/// Base class for all domain errors. `kind()` is a stable machine-readable
/// name; the CLI prints it on stderr and maps it to an exit code.
class BamdpError : public std::runtime_error {
public:
    BamdpError(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

/// A model, belief, cover, or file violated a structural invariant.
class ValidationError : public BamdpError {
public:
    explicit ValidationError(const std::string& message)
        : BamdpError("ValidationError", message) {}
};

/// A file could not be read or parsed.
class ParseError : public BamdpError {
public:
    explicit ParseError(const std::string& message) : BamdpError("ParseError", message) {}
};

/// Posterior update on an (s, a, s') tuple with zero predictive probability.
class ImpossibleObservation : public BamdpError {
public:
    explicit ImpossibleObservation(const std::string& message)
        : BamdpError("ImpossibleObservation", message) {}
};

/// Hyperstate enumeration exceeded the configured cap.
class SpaceExplosion : public BamdpError {
public:
    explicit SpaceExplosion(const std::string& message)
        : BamdpError("SpaceExplosion", message) {}
};

/// A successor hyperstate was missing from the space during a value lookup.
class InconsistentSpace : public BamdpError {
public:
    explicit InconsistentSpace(const std::string& message)
        : BamdpError("InconsistentSpace", message) {}
};

/// A policy had no action for a hyperstate it was asked about.
class IncompletePolicy : public BamdpError {
public:
    explicit IncompletePolicy(const std::string& message)
        : BamdpError("IncompletePolicy", message) {}
};

/// identify_theta was called on a belief with residual uncertainty.
class NotDirac : public BamdpError {
public:
    explicit NotDirac(const std::string& message) : BamdpError("NotDirac", message) {}
};

/// A bootstrapped successor still carried uncertainty: the supplied
/// information horizon was too small for the model.
class InfoHorizonViolated : public BamdpError {
public:
    explicit InfoHorizonViolated(const std::string& message)
        : BamdpError("InfoHorizonViolated", message) {}
};

/// The model's information horizon is infinite, so informed planning
/// cannot be applied to it directly.
class InfiniteInformationHorizon : public BamdpError {
public:
    explicit InfiniteInformationHorizon(const std::string& message)
        : BamdpError("InfiniteInformationHorizon", message) {}
};

/// The induced abstract model's information horizon is infinite; a larger
/// delta or a different cover is needed.
class AbstractHorizonInfinite : public BamdpError {
public:
    explicit AbstractHorizonInfinite(const std::string& message)
        : BamdpError("AbstractHorizonInfinite", message) {}
};

/// A cover cell had no representative under the uniform weighting.
class EmptyCell : public BamdpError {
public:
    explicit EmptyCell(const std::string& message) : BamdpError("EmptyCell", message) {}
};

/// No lattice resolution below the cap certified at the requested delta.
class CoverTooFine : public BamdpError {
public:
    explicit CoverTooFine(const std::string& message)
        : BamdpError("CoverTooFine", message) {}
};

/// Value tables from different instances were combined in one report.
class MismatchedInstances : public BamdpError {
public:
    explicit MismatchedInstances(const std::string& message)
        : BamdpError("MismatchedInstances", message) {}
};

}  // namespace bamdp
