#include <cstdio>

#include "fast_path_audit.hpp"

int main() {
  const FastPathAudit a = audit_fast_path(100, 50000);
  const double mp_bytes = static_cast<double>(a.m * a.p * sizeof(double));
  const double pp_bytes = static_cast<double>(a.p) * static_cast<double>(a.p) * sizeof(double);
  std::printf("fast path m=%zu p=%zu: largest request %zu bytes (%.2f x m*p doubles, %.2e x p*p), "
              "%zu requests, %zu bytes total\n",
              a.m, a.p, a.largest, a.largest / mp_bytes, a.largest / pp_bytes, a.requests, a.total);
  std::printf("%s\n", a.pass ? "PASS" : "FAIL");
  return a.pass ? 0 : 1;
}
