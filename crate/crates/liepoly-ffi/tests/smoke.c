#include <stdio.h>
#include <string.h>
#include "liepoly.h"

static int failures = 0;

static void expect(int cond, const char *what) {
  if (!cond) {
    fprintf(stderr, "FAIL: %s\n", what);
    failures++;
  }
}

int main(void) {
  LiepolyElement *e = NULL;
  expect(liepoly_parse("[vvu]", &e) == LIEPOLY_STATUS_OK, "parse [vvu]");

  LiepolyElement *nf = NULL;
  char *trace = NULL;
  expect(liepoly_reduce(e, &nf, &trace) == LIEPOLY_STATUS_OK, "reduce");
  char *text = NULL;
  expect(liepoly_element_to_string(nf, &text) == LIEPOLY_STATUS_OK, "to_string");
  expect(strcmp(text, "-1/6*[vu^3]") == 0, "normal form text");
  expect(strstr(trace, "defining-relation") != NULL, "trace rule");
  liepoly_string_free(text);
  liepoly_string_free(trace);
  liepoly_element_free(nf);

  LiepolyElement *image = NULL;
  expect(liepoly_phi(e, &image) == LIEPOLY_STATUS_OK, "phi");
  expect(liepoly_element_to_string(image, &text) == LIEPOLY_STATUS_OK, "image text");
  expect(strcmp(text, "-x^5*y") == 0, "phi([vvu]) = -x^5*y");
  liepoly_string_free(text);
  liepoly_element_free(image);
  liepoly_element_free(e);

  LiepolyElement *bad = NULL;
  expect(liepoly_parse("[uv]", &bad) == LIEPOLY_STATUS_PARSE_ERROR, "reject [uv]");
  expect(strstr(liepoly_last_error_message(), "position 2") != NULL, "error position");

  bool passed = false;
  expect(liepoly_verify(4, 5, 3, &passed, NULL) == LIEPOLY_STATUS_OK, "verify");
  expect(passed, "verify passed");

  if (failures == 0) puts("C smoke test passed");
  return failures;
}
