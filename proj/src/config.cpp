#include "freegeo/config.hpp"

namespace freegeo {

namespace {
Tolerances g_tolerances;
}

const Tolerances& tolerances() { return g_tolerances; }

void set_tolerances(const Tolerances& tol) { g_tolerances = tol; }

}  // namespace freegeo
