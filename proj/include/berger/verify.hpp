#pragma once

// Named residuals of the surface identities, inequalities and equality cases in
// E^3(kappa, tau), gathered into CheckReports.

#include "berger/surface.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace berger {

enum class CheckStatus { Pass, Fail, Inapplicable };

std::string to_string(CheckStatus s);

struct UnknownCheckError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// One identity evaluated on the grid.
struct SubResidual {
    std::string id;
    double max_abs = 0.0;               ///< pointwise max |residual| (patch-edge rows excluded)
    std::optional<double> integral;     ///< int residual dA (closed surfaces only)
};

struct GridMeta {
    int nu = 0, nv = 0;
    double hu = 0.0, hv = 0.0;
    bool closed = false;
};

struct CheckReport {
    std::string id;
    CheckStatus status = CheckStatus::Pass;
    double pointwise_max_residual = 0.0;
    std::optional<double> integral_value;
    double tolerance = 0.0;
    double integral_tolerance = 0.0;
    std::vector<SubResidual> residuals;
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::pair<std::string, bool>> flags;
    std::string note;
    GridMeta grid;
    double kappa = 0.0, tau = 0.0;
    std::string surface;

    bool passed() const { return status != CheckStatus::Fail; }
    const SubResidual* residual(const std::string& sub_id) const;
    std::optional<double> value(const std::string& key) const;
    std::optional<bool> flag(const std::string& key) const;
};

struct Tolerances {
    double pointwise = 0.0;
    double integral = 0.0;  ///< absolute; default is pointwise * Area

    /// kCalibration * factor(check) * max(1, |kappa| + tau^2) * h^2, with h the coarser grid spacing.
    /// An empty check id gives the base gate (factor 1), 1e-4 at 128^2 on the unit model.
    static Tolerances defaults(const GeometryField& gf, const std::string& check_id = "");
    static constexpr double kCalibration = 0.0415;
    /// Per-check multiplier; checks stacking third and fourth derivatives carry larger constants.
    static double factor(const std::string& check_id);
};

/// P = 2H Id - A.
struct NewtonTransform {
    TensorField P;
    explicit NewtonTransform(const GeometryField& gf);
};

/// Vector fields of the divergence-type formulae and the integrand Q.
struct AuxFields {
    TangentField U, V;
    ScalarField Q;
};

/// tr(P o Hess f).
ScalarField cheng_yau(const GeometryField& gf, const ScalarField& f);

AuxFields aux_fields(const GeometryField& gf);

/// Derivative fields shared by the checks, computed once per surface.
struct CheckContext;

class Verifier {
public:
    Verifier(const GeometryField& gf, std::optional<Tolerances> tol = std::nullopt);
    ~Verifier();
    Verifier(const Verifier&) = delete;
    Verifier& operator=(const Verifier&) = delete;

    const GeometryField& geometry() const { return gf_; }
    /// Gates used for `check_id`: the override if one was given, else the calibrated default.
    Tolerances tolerances(const std::string& check_id = "") const;

    CheckReport structural() const;
    CheckReport trace_nabla_A() const;
    CheckReport simons() const;
    CheckReport cheng_yau_divergence() const;
    CheckReport divergence_lemma() const;
    CheckReport corollary_UV() const;
    CheckReport kato() const;
    CheckReport reverse_kato() const;
    CheckReport euler_lagrange() const;
    CheckReport theorem_46() const;
    CheckReport theorem_55() const;
    CheckReport theorem_56() const;

    CheckReport run(const std::string& id) const;

private:
    CheckReport make_report(const std::string& id) const;
    void finish_identity(CheckReport& r) const;

    const GeometryField& gf_;
    std::optional<Tolerances> override_;
    std::unique_ptr<CheckContext> ctx_;
};

/// Check ids in report order.
const std::vector<std::string>& all_check_ids();

/// Whether `id` names a check or a sub-residual (e.g. "lemma5.1a", "structural.eq2.8").
bool is_known_residual(const std::string& id);

/// Runs the requested checks; {"all"} or an empty list means every check.
std::vector<CheckReport> run_checks(const GeometryField& gf, const std::vector<std::string>& ids,
                                    std::optional<Tolerances> tol = std::nullopt);

/// Max residual of a check or sub-residual id on gf.
double residual_of(const GeometryField& gf, const std::string& id);

/// Free-function forms.
CheckReport check_structural(const GeometryField& gf);
CheckReport check_simons(const GeometryField& gf);
CheckReport check_cheng_yau_divergence(const GeometryField& gf);
CheckReport check_divergence_lemma(const GeometryField& gf);
CheckReport check_corollary_UV(const GeometryField& gf);
CheckReport check_kato(const GeometryField& gf);
CheckReport check_reverse_kato(const GeometryField& gf);
CheckReport check_theorem_46(const GeometryField& gf);
CheckReport check_theorem_55(const GeometryField& gf);
CheckReport check_theorem_56(const GeometryField& gf);

}  // namespace berger
