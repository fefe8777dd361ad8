#ifndef LOVESIM_CAPI_H
#define LOVESIM_CAPI_H

/* C interface of the simulator core. All functions returning int use
 * 0 for success; nonzero values are error codes:
 *   2 configuration error, 3 divergence, 4 domain error, 5 unsupported.
 * Strings returned through char** are heap-allocated; release them with
 * love_string_free. Handles are opaque and freed by their _free function.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct love_kernel love_kernel;
typedef struct love_modulus love_modulus;

const char* love_version(void);
void love_string_free(char* s);

/* ---- memory kernels -------------------------------------------------- */

/* spec: JSON such as {"family":"exponential","a":0.5,"b":1.0} */
love_kernel* love_kernel_from_json(const char* spec, char** error_out);
void love_kernel_free(love_kernel* k);

int love_kernel_mu(const love_kernel* k, double s, double* out);
int love_kernel_mu_prime(const love_kernel* k, double s, double* out);
int love_kernel_mass(const love_kernel* k, double* out);

/* report_out receives the certification report as JSON */
int love_kernel_certify_hyp1(const love_kernel* k, int sample_count,
                             char** report_out);

/* ---- convex moduli --------------------------------------------------- */

love_modulus* love_modulus_from_json(const char* spec, char** error_out);
void love_modulus_free(love_modulus* m);

int love_modulus_h(const love_modulus* m, double t, double* out);
int love_modulus_h_inv(const love_modulus* m, double u, double* out);
int love_young_conjugate(const love_modulus* m, double s, double* out);

int love_certify_condition_h(const love_kernel* k, const love_modulus* m,
                             double s_max, double tol, char** report_out);

/* ---- commands -------------------------------------------------------- */

/* Run one subcommand (check-kernel, simulate, verify-decay, mms, sweep)
 * against a JSON configuration. Returns the command exit code:
 * 0 pass, 1 property failed, 2 usage/config error, 3 divergence.
 * out_dir may be NULL (no files written); report_out may be NULL.
 */
int love_run_command(const char* subcommand, const char* config_json,
                     const char* out_dir, int jobs, char** report_out);

#ifdef __cplusplus
}
#endif

#endif /* LOVESIM_CAPI_H */
