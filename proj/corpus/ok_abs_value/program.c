int main() {
  int x, y;
  scanf("%d", &x);
  if (x < 0)
    y = -x;
  else
    y = x;
  printf("%d\n", y);
  return 0;
}
