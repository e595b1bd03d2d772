#include "diffgeo/carre_du_champ.hpp"

#include "diffgeo/error.hpp"

namespace diffgeo {

Vector gamma(const LaplacianOperator& op, const Vector& f, const Vector& h) {
    const auto n = op.size();
    if (f.size() != n || h.size() != n) throw Error(ErrorKind::Shape, "gamma arguments must have length n");
    const auto& markov = op.markov();
    const auto* start = markov.outerIndexPtr();
    const auto* cols = markov.innerIndexPtr();
    const auto* vals = markov.valuePtr();
    const auto& scale = op.row_scale();
    Vector out(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (auto e = start[i]; e < start[i + 1]; ++e) {
            const auto j = cols[e];
            acc += vals[e] * ((f(j) - f(i)) * (h(j) - h(i)));
        }
        out(i) = 0.5 * scale(i) * acc;
    }
    return out;
}

Vector hessian_form(const LaplacianOperator& op, const Vector& f, const Vector& h1, const Vector& h2) {
    const Vector first = gamma(op, h1, gamma(op, h2, f));
    const Vector second = gamma(op, h2, gamma(op, h1, f));
    const Vector third = gamma(op, f, gamma(op, h1, h2));
    return 0.5 * ((first + second) - third);
}

}  // namespace diffgeo
