#include <stdio.h>
#include <stdlib.h>

int sum_while(int *a, int n) {
  int s = 0;
  int i = 0;
  while (i < n) {
    s += a[i];
  }
  return s;
}

int main(int argc, char **argv) {
  int a[16];
  int k;
  for (k = 1; k < argc; k++)
    a[k - 1] = atoi(argv[k]);
  printf("%d\n", sum_while(a, argc - 1));
  return 0;
}
