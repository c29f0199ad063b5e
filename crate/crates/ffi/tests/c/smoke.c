#include <math.h>
#include <stdio.h>
#include <string.h>

#include "homogeneous_finsler.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,   \
                    #cond, hf_last_error_message());                  \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(int argc, char **argv) {
    if (argc < 2) {
        fprintf(stderr, "usage: smoke FIXTURE\n");
        return 2;
    }
    HfSpace *sp = NULL;
    CHECK(hf_space_from_file(argv[1], &sp) == HF_STATUS_OK);
    CHECK(hf_space_dim(sp) == 3 && hf_space_m_dim(sp) == 3);

    double y[3] = {0.0, 0.0, 1.0};
    double f = 0.0;
    CHECK(hf_finsler_norm(sp, y, 3, &f) == HF_STATUS_OK);
    CHECK(f > 0.0);

    double gd = 0.0, gc = 0.0;
    CHECK(hf_g_oracle(sp, y, y, y, 3, 0.0, &gd) == HF_STATUS_OK);
    CHECK(hf_g_closed(sp, y, y, y, 3, &gc) == HF_STATUS_OK);
    CHECK(fabs(gd - f * f) <= 1e-12 * f * f);
    CHECK(fabs(gc - gd) <= 1e-12 * gd);

    bool geo = false;
    CHECK(hf_is_geodesic_vector(sp, y, 3, 0.0, HF_SOURCE_DEFAULT, &geo) == HF_STATUS_OK);
    CHECK(geo);

    double values[3], norm = -1.0;
    double off[3] = {1.0, 0.0, 0.0};
    CHECK(hf_criterion_residual(sp, off, 3, HF_SOURCE_DEFAULT, values, &norm) == HF_STATUS_OK);
    CHECK(norm > 1e-3);

    CHECK(hf_finsler_norm(sp, y, 2, &f) == HF_STATUS_DIMENSION_MISMATCH);
    CHECK(strlen(hf_last_error_message()) > 0);
    CHECK(hf_finsler_norm(sp, NULL, 3, &f) == HF_STATUS_NULL_POINTER);

    hf_space_free(sp);
    printf("ffi smoke ok %s\n", hf_version());
    return 0;
}
