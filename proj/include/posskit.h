/* posskit — possibility-semantics toolkit, C interface.
 *
 * The library parses structure files describing finite posets, frames,
 * algebras, and first-order models, and runs checks, forcing evaluation,
 * validity searches, and completion constructions over them. All functions
 * return a status code; 0 means pass/true/valid, 1 fail/false/countermodel,
 * 2 bad input, 3 an enumeration guard was exceeded. Reports are heap strings
 * owned by the caller; release them with posskit_free_string.
 */
#ifndef POSSKIT_H
#define POSSKIT_H

#ifdef __cplusplus
extern "C" {
#endif

#define POSSKIT_OK 0
#define POSSKIT_FAIL 1
#define POSSKIT_ERR_INPUT 2
#define POSSKIT_ERR_CAP 3

/* report option bits */
#define POSSKIT_OPT_JSON 1u
#define POSSKIT_OPT_VERBOSE 2u

typedef struct posskit_structure posskit_structure;

const char* posskit_version(void);

/* Parse a structure file from disk or memory. On success *out receives a
 * handle; on failure *errmsg (when non-null) receives a message. */
int posskit_load_file(const char* path, posskit_structure** out, char** errmsg);
int posskit_load_string(const char* text, posskit_structure** out, char** errmsg);
void posskit_free(posskit_structure* s);
void posskit_free_string(char* s);

/* "poset", "frame", "relframe", "nbframe", "ba", "lattice", or "fomodel". */
const char* posskit_kind(const posskit_structure* s);

/* Override the valuation-space guard for validity searches; values <= 0
 * restore the default. */
void posskit_set_search_cap(posskit_structure* s, long long cap);

/* Run every validator applicable to the structure. */
int posskit_check(const posskit_structure* s, unsigned opts, char** report);

/* Force a formula at a named point. */
int posskit_eval(const posskit_structure* s, const char* point, const char* formula,
                 unsigned opts, char** report);

/* Search all admissible valuations for a countermodel. */
int posskit_valid(const posskit_structure* s, const char* formula, unsigned opts,
                  char** report);

/* Completion constructions: "macneille", "canonical", "ro", "dragalin". */
int posskit_complete(const posskit_structure* s, const char* what, unsigned opts,
                     char** report);

/* Frames dump their algebras; algebras dump their general filter frames. */
int posskit_dualize(const posskit_structure* s, unsigned opts, char** report);

#ifdef __cplusplus
}
#endif

#endif /* POSSKIT_H */
