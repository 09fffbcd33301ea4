int main() {
  int n, i, p;
  scanf("%d", &n);
  p = 1;
  if (n < 2)
    p = 0;
  for (i = 2; i * i < n; i++) {
    if (n % i == 0)
      p = 0;
  }
  printf("%d\n", p);
  return 0;
}
