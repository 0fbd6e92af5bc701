/* MG zran3: random fill of the grid, then per-row extremes to mark +1/-1 points. */
#include <stdio.h>

#define N1 34
#define N2 34
#define N3 34
#define A 1220703125.0

double z[N3][N2][N1];
double rmax[N3][N2];
double rmin[N3][N2];

double randlc(double *x, double a)
{
  double r23, r46, t23, t46, t1, t2, t3, t4, a1, a2, x1, x2, w;
  int i;

  r23 = 1.0;
  for (i = 0; i < 23; i++)
    r23 = 0.5 * r23;
  r46 = r23 * r23;
  t23 = 1.0 / r23;
  t46 = t23 * t23;
  t1 = r23 * a;
  a1 = (int) t1;
  a2 = a - t23 * a1;
  t1 = r23 * *x;
  x1 = (int) t1;
  x2 = *x - t23 * x1;
  t1 = a1 * x2 + a2 * x1;
  t2 = (int) (r23 * t1);
  w = t1 - t23 * t2;
  t3 = t23 * w + a2 * x2;
  t4 = (int) (r46 * t3);
  *x = t3 - t46 * t4;
  return r46 * *x;
}

void vranlc(int n, double *x, double a, double y[])
{
  int i;

  for (i = 0; i < n; i++)
    y[i] = randlc(x, a);
}

void zran3(void)
{
  int i1, i2, i3, j1, j2, j3, k1, k2, k3;
  double x0, xx, best, worst;

#pragma omp parallel for private(i2, i1)
  for (i3 = 0; i3 < N3; i3++)
    for (i2 = 0; i2 < N2; i2++)
      for (i1 = 0; i1 < N1; i1++)
        z[i3][i2][i1] = 0.0;

#pragma omp parallel for private(i2, x0, xx)
  for (i3 = 1; i3 < N3 - 1; i3++) {
    x0 = 314159265.0 + 2.0 * i3;
    for (i2 = 1; i2 < N2 - 1; i2++) {
      xx = x0;
      vranlc(N1 - 2, &xx, A, &z[i3][i2][1]);
      x0 = x0 + 1.0;
    }
  }

#pragma omp parallel default(shared) private(i1, i2, i3, best)
  {
    for (i3 = 1; i3 < N3 - 1; i3++) {
#pragma omp for
      for (i2 = 1; i2 < N2 - 1; i2++) {
        best = z[i3][i2][1];
        for (i1 = 2; i1 < N1 - 1; i1++) {
          if (z[i3][i2][i1] > best)
            best = z[i3][i2][i1];
        }
        rmax[i3][i2] = best;
      }
    }

    for (i3 = 1; i3 < N3 - 1; i3++) {
#pragma omp for
      for (i2 = 1; i2 < N2 - 1; i2++) {
        best = z[i3][i2][1];
        for (i1 = 2; i1 < N1 - 1; i1++) {
          if (z[i3][i2][i1] < best)
            best = z[i3][i2][i1];
        }
        rmin[i3][i2] = best;
      }
    }
  }

  best = -1.0;
  worst = 2.0;
  j1 = j2 = j3 = k1 = k2 = k3 = 1;
  for (i3 = 1; i3 < N3 - 1; i3++) {
    for (i2 = 1; i2 < N2 - 1; i2++) {
      if (rmax[i3][i2] > best) {
        best = rmax[i3][i2];
        j3 = i3;
        j2 = i2;
      }
      if (rmin[i3][i2] < worst) {
        worst = rmin[i3][i2];
        k3 = i3;
        k2 = i2;
      }
    }
  }
  for (i1 = 1; i1 < N1 - 1; i1++) {
    if (z[j3][j2][i1] == best)
      j1 = i1;
    if (z[k3][k2][i1] == worst)
      k1 = i1;
  }
  for (i3 = 0; i3 < N3; i3++)
    for (i2 = 0; i2 < N2; i2++)
      for (i1 = 0; i1 < N1; i1++)
        z[i3][i2][i1] = 0.0;
  z[j3][j2][j1] = 1.0;
  z[k3][k2][k1] = -1.0;
  printf("max %.12e at %d %d %d\n", best, j1, j2, j3);
  printf("min %.12e at %d %d %d\n", worst, k1, k2, k3);
}

int main(void)
{
  int i1, i2, i3;
  double sum = 0.0;

  zran3();
  for (i3 = 0; i3 < N3; i3++)
    for (i2 = 0; i2 < N2; i2++)
      for (i1 = 0; i1 < N1; i1++)
        sum = sum + z[i3][i2][i1] * (i1 + 2 * i2 + 3 * i3);
  printf("checksum = %.12e\n", sum);
  return 0;
}
