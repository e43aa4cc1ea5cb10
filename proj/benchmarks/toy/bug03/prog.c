#include <stdio.h>
#include <stdlib.h>

int count_zeros(int *a, int n) {
  int c = 0;
  int i;
  for (i = 0; i < n; i++) {
    if (a[i] = 0)
      c++;
  }
  return c;
}

int main(int argc, char **argv) {
  int a[16];
  int k;
  for (k = 1; k < argc; k++)
    a[k - 1] = atoi(argv[k]);
  printf("%d\n", count_zeros(a, argc - 1));
  return 0;
}
