#include <stdio.h>
#include <stdlib.h>

int max_of(int *a, int n) {
  int m = a[0];
  int i;
  for (i = 1; i < n; i++) {
    if (a[i] < m)
      m = a[i];
  }
  return m;
}

int main(int argc, char **argv) {
  int a[16];
  int k;
  for (k = 1; k < argc; k++)
    a[k - 1] = atoi(argv[k]);
  printf("%d\n", max_of(a, argc - 1));
  return 0;
}
