#include <math.h>
#include <stdio.h>
#include <string.h>

#include "gaussinv.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, \
              #cond);                                                 \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  GiState *twb = NULL, *out = NULL;
  GiUnitary *u = NULL;
  GiReport2 r;

  CHECK(gi_state_twin_beam(1.0, &twb) == GI_STATUS_OK);
  CHECK(gi_state_modes(twb) == 2);
  CHECK(gi_unitary_haar(2, 42, &u) == GI_STATUS_OK);
  CHECK(gi_unitary_apply(u, twb, &out) == GI_STATUS_OK);
  CHECK(gi_invariants2(out, &r) == GI_STATUS_OK);
  CHECK(fabs(r.gni - 2.0) < 1e-9);
  CHECK(gi_invariants2(twb, &r) == GI_STATUS_OK);
  CHECK(fabs(r.e_n - 2.0 * log(1.0 + sqrt(2.0))) < 1e-10);

  char *json = NULL;
  CHECK(gi_state_to_json(twb, &json) == GI_STATUS_OK);
  CHECK(strstr(json, "\"modes\"") != NULL);
  gi_string_free(json);

  GiState *bad = NULL;
  CHECK(gi_state_from_json("{\"B1\": 0, \"B2\": 0, \"D12\": 1}", &bad) == GI_STATUS_OK);
  CHECK(gi_invariants2(bad, &r) == GI_STATUS_UNPHYSICAL);
  CHECK(strstr(gi_last_error_message(), "min_eig") != NULL);
  gi_state_free(bad);

  GiThreeModeScheme s;
  CHECK(gi_three_mode_scheme(1.0, 0.5, true, &s) == GI_STATUS_OK);
  CHECK(fabs(s.gni3 - 2.0) < 1e-9);

  gi_unitary_free(u);
  gi_state_free(out);
  gi_state_free(twb);
  printf("ok %s\n", gi_version());
  return 0;
}
