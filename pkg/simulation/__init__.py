# simulation 模块
# 用于高斯调制与分束器信道的蒙特卡罗验证
