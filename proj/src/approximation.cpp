#include "ricciflow/approximation.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ricciflow/errors.hpp"
#include "ricciflow/metric_distance.hpp"
#include "ricciflow/spectral.hpp"

namespace ricci {

SignedMeasure mollify(const SignedMeasure& m, double eps) {
    const double h = std::max(m.grid.dx(), m.grid.dy());
    require(eps >= h, "mollify: scale " + format_double(eps) +
                          " under-resolves the grid (need eps >= " + format_double(h) + ")");

    // Atoms enter as cell-center pulses of the right total mass, then the
    // whole signed density is smoothed spectrally at heat time eps^2.
    ScalarField combined = m.density;
    const double inv_cell = 1.0 / m.grid.cell_area();
    for (const auto& a : m.atoms) combined.at(a.ix, a.iy) += a.mass * inv_cell;

    SignedMeasure out(m.grid);
    SpectralWorkspace ws(m.grid);
    ws.heat_smooth(combined.data(), out.density.data(), eps);
    return out;
}

MollifiedFamily build_family(const SingularSurfaceSpec& spec,
                             const std::vector<double>& epsilons,
                             int sample_lattice) {
    spec.validate();
    require(!epsilons.empty(), "build_family: empty epsilon ladder");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        require(epsilons[i] < epsilons[i - 1], "build_family: epsilons must decrease");

    MollifiedFamily family;
    family.spec = spec;
    const SamplePointSet samples = SamplePointSet::make(spec.grid, sample_lattice);

    DistanceMatrix previous;
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        MollifiedFamily::Member member;
        member.eps = epsilons[i];
        member.field = potential_from_spec(spec, epsilons[i]);

        const ScalarField w = exp2_field(member.field.u);
        member.min_curvature = gauss_curvature(w).min();
        member.volume = integrate(w);

        DistanceMatrix dm = conformal_distance(member.field.u, samples);
        member.diameter = dm.diameter();
        member.gh_to_previous = (i == 0) ? 0.0 : gh_distortion(previous, dm);
        previous = std::move(dm);

        member.lower_bound_ok = member.min_curvature >= spec.lower_bound - 0.05;
        member.volume_window_ok = member.volume >= 0.5 * spec.volume * (1.0 - 1e-9) &&
                                  member.volume <= spec.volume * (1.0 + 1e-9);
        family.members.push_back(std::move(member));
    }
    return family;
}

std::string MollifiedFamily::report_json() const {
    nlohmann::json j;
    j["volume_target"] = spec.volume;
    j["lower_bound"] = spec.lower_bound;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : members)
        arr.push_back({{"eps", m.eps},
                       {"minK", m.min_curvature},
                       {"vol", m.volume},
                       {"diameter", m.diameter},
                       {"gh_to_previous", m.gh_to_previous},
                       {"lower_bound_ok", m.lower_bound_ok},
                       {"volume_window_ok", m.volume_window_ok}});
    j["members"] = arr;
    return j.dump(2);
}

}  // namespace ricci
