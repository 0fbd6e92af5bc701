/* IS key ranking: per-thread histograms, a column sum over threads, then a prefix sum. */
#include <stdio.h>
#include <omp.h>

#define NUM_KEYS 4096
#define MAX_KEY 512
#define MAX_ITERATIONS 6
#define TEST_ARRAY_SIZE 5
#define MAXT 16

int key_array[NUM_KEYS];
int key_buff1[MAX_KEY];
int bucket_size[MAXT][MAX_KEY];
int partial_verify_vals[TEST_ARRAY_SIZE];
int test_index_array[TEST_ARRAY_SIZE] = {48, 1024, 2000, 3001, 4000};
int work_buff[MAX_KEY];
#pragma omp threadprivate(work_buff)
int nthreads_used;
long passed_verification;

void rank(int iteration)
{
  int i, k, t, tid;

  key_array[iteration] = iteration;
  key_array[iteration + MAX_ITERATIONS] = MAX_KEY - 1 - iteration;

  for (i = 0; i < TEST_ARRAY_SIZE; i++)
    partial_verify_vals[i] = key_array[test_index_array[i]];

#pragma omp parallel private(i, k, t, tid)
  {
    tid = omp_get_thread_num();
    for (i = 0; i < MAX_KEY; i++)
      work_buff[i] = 0;

#pragma omp for schedule(dynamic, 64)
    for (i = 0; i < NUM_KEYS; i++)
      work_buff[key_array[i]]++;

    for (i = 0; i < MAX_KEY; i++)
      bucket_size[tid][i] = work_buff[i];
#pragma omp barrier

#pragma omp single
    nthreads_used = omp_get_num_threads();

    for (t = 0; t < nthreads_used; t++) {
#pragma omp for
      for (i = 0; i < MAX_KEY; i++)
        key_buff1[i] = (t == 0 ? 0 : key_buff1[i]) + bucket_size[t][i];
    }

#pragma omp single
    for (i = 0; i < MAX_KEY - 1; i++)
      key_buff1[i + 1] += key_buff1[i];

    for (t = 0; t < nthreads_used; t++) {
#pragma omp for
      for (i = 0; i < MAX_KEY; i++)
        bucket_size[t][i] = 0;
    }

#pragma omp single
    for (i = 0; i < TEST_ARRAY_SIZE; i++) {
      k = partial_verify_vals[i];
      if (k > 0 && k < MAX_KEY)
        passed_verification += key_buff1[k - 1] + iteration;
    }
  }
}

int main(void)
{
  int i, iteration;
  long sum = 0;
  unsigned long seed = 314159265UL;

  for (i = 0; i < NUM_KEYS; i++) {
    seed = (seed * 1103515245UL + 12345UL) % 2147483648UL;
    key_array[i] = (int) ((seed >> 8) % MAX_KEY);
  }
  for (iteration = 1; iteration <= MAX_ITERATIONS; iteration++) {
    rank(iteration);
  }
  for (i = 0; i < MAX_KEY; i++)
    sum = sum + (long) key_buff1[i] * (i % 13 + 1);
  printf("checksum = %ld %ld\n", sum, passed_verification);
  return 0;
}
