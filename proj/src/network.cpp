#include "psctsa/network.hpp"

#include "psctsa/errors.hpp"

namespace psctsa {

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0)) {
        throw DomainError(std::string("reactance must be positive: ") + what);
    }
}

double parallel(double x1, double x2) { return x1 * x2 / (x1 + x2); }

} // namespace

const char* to_string(NetLabel label) {
    switch (label) {
    case NetLabel::PreFault: return "pre";
    case NetLabel::DuringFault: return "during";
    case NetLabel::PostFault: return "post";
    }
    return "?";
}

NetworkState reduce_pre(const NetworkElements& e) {
    require_positive(e.x_t, "x_t");
    require_positive(e.x_g1, "x_g1");
    require_positive(e.x_g2, "x_g2");
    return {NetLabel::PreFault, e.x_t + parallel(e.x_g1, e.x_g2)};
}

NetworkState reduce_during_fault(const NetworkElements& e) {
    require_positive(e.x_t, "x_t");
    require_positive(e.x_g1, "x_g1");
    require_positive(e.x_g2, "x_g2");
    if (!e.x_gnd) {
        throw DomainError("during-fault reduction needs a grounding reactance x_gnd");
    }
    require_positive(*e.x_gnd, "x_gnd");
    // Star-delta of the grounded node joining x_t and the paralleled lines.
    const double x_p = parallel(e.x_g1, e.x_g2);
    const double x_transfer = e.x_t + x_p + e.x_t * x_p / *e.x_gnd;
    return {NetLabel::DuringFault, x_transfer};
}

NetworkState reduce_post(const NetworkElements& e) {
    require_positive(e.x_t, "x_t");
    require_positive(e.x_g1, "x_g1");
    return {NetLabel::PostFault, e.x_t + e.x_g1};
}

void FaultScenario::validate() const {
    if (!(pre.x_transfer > 0.0) || !(post.x_transfer > 0.0) ||
        (during_fault && !(during_fault->x_transfer > 0.0))) {
        throw DomainError("scenario network states need positive transfer reactance");
    }
    if (!(t_fault >= 0.0)) {
        throw DomainError("t_fault must be non-negative");
    }
    if (t_clear && !(*t_clear > t_fault)) {
        throw DomainError("t_clear must be later than t_fault");
    }
    if (t_clear && !during_fault) {
        throw DomainError("a clearing time without a during-fault state is meaningless");
    }
}

} // namespace psctsa
