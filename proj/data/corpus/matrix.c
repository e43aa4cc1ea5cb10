#include <stdio.h>

double trace(double m[4][4], int n)
{
  double t = 0.0;
  int i;
  for (i = 0; i < n; i++)
    t += m[i][i];
  return t;
}

int    clamp ( int x , int lo , int hi )
{
  if (x < lo) { return lo; }
  else if (x > hi)
  {
      return hi;
  }
  return x;
}

int main(int argc, char **argv)
{
  double m[4][4] = {{0}};
  int r = clamp(argc, 0, 3);
  printf("%d %f\n", r, trace(m, 4));
  return 0;
}
