// Evaluates the shape residual of the unit disk at tau = i along all three
// routes (closed form, boundary integral, lattice limit) and prints how far
// apart they land. Expected output: three values agreeing with -pi.

#include <cstdio>

#include "shapesum/residual.hpp"

int main() {
    using namespace shapesum;

    const auto disk = ShapeSpec::disk();
    const TauPoint tau(cplx(0.0, 1.0));

    const auto closed = residual_closed_form(disk, tau);
    const auto integral = residual_integral(disk, tau);

    SumConfig cfg;
    cfg.schedule = {125, 250, 500, 1000};
    const auto lattice = residual_lattice(disk, tau, cfg);

    const auto show = [](const char* label, const ResidualValue& r) {
        std::printf("%-9s % .15f %+.15f i   (err est %.2e)\n", label,
                    r.value.real(), r.value.imag(), r.error_estimate);
    };
    show("closed", closed);
    show("integral", integral);
    show("lattice", lattice);

    std::printf("spread   %.3e\n",
                std::max(std::abs(closed.value - integral.value),
                         std::abs(closed.value - lattice.value)));
    return 0;
}
