#pragma once

// Serialization helpers shared by the command-line tool and the tests.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpsteer/criterion.hpp"
#include "rpsteer/search.hpp"
#include "rpsteer/states.hpp"

namespace rpsteer {

/// Family by name: "werner" (eta), "pure-mixed" (alpha, eta),
/// "depolarized" (alpha, eta_a, eta_b) or "state" (explicit matrix).
/// Throws DomainError for unknown names or missing parameters.
EllipseFamily make_family(const std::string& name, const std::map<std::string, double>& params,
                          const std::optional<TwoQubitRealState>& state = std::nullopt);

/// "n,r1,r3" -> BlochOp.  Throws DomainError.
BlochOp parse_bloch(std::string_view text);

/// Certificate JSON: family, params, Y, kind, eigenvalues, quadrature and
/// tolerance settings, plus an optional note.
std::string certificate_json(const EllipseFamily& fam, const Verdict& v, const Quadrature& q,
                             const std::string& note = "");

/// 800x600 SVG of a sweep: certified-unsteerable region shaded below
/// eta_lower, eta_upper drawn as a line, and the tilt line when present.
std::string render_svg(const std::vector<BoundaryPoint>& rows, bool with_tilt_line);

}  // namespace rpsteer
