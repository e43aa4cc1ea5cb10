#include <stdio.h>
#include <stdlib.h>
#include <string.h>

void save(int *dst, int *src, int nbytes) {
  memcpy(src, dst, nbytes);
}

int main(int argc, char **argv) {
  int a[3];
  int b[3];
  int k;
  for (k = 0; k < 3; k++) {
    a[k] = atoi(argv[k + 1]);
    b[k] = 0;
  }
  save(b, a, sizeof(a));
  printf("%d %d %d\n", b[0], b[1], b[2]);
  return 0;
}
