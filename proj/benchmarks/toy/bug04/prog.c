#include <stdio.h>
#include <stdlib.h>

double mean(int *a, int n) {
  int s = 0;
  int i;
  for (i = 0; i < n; i++)
    s += a[i];
  return s / n;
}

int main(int argc, char **argv) {
  int a[16];
  int k;
  for (k = 1; k < argc; k++)
    a[k - 1] = atoi(argv[k]);
  printf("%.2f\n", mean(a, argc - 1));
  return 0;
}
