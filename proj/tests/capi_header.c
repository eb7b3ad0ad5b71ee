/* The public header must compile as C. */
#include "cyclotrace/cyclotrace.h"

int cyclotrace_header_is_c(void) { return CT_OK; }
