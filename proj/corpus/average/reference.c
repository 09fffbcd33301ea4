int main() {
  int a[5];
  int i, s, n;
  scanf("%d", &n);
  s = 0;
  for (i = 0; i < n; i++) {
    scanf("%d", &a[i]);
    s = s + a[i];
  }
  if (n > 0)
    s = s / n;
  printf("%d\n", s);
  return 0;
}
